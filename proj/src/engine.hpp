// SPDX-License-Identifier: MIT
//
// Instance runner: dispatches a loaded lineage to the right attribution
// method, enforces the efficiency invariant, and assembles a report with
// timings and tree statistics. This is the layer the C API wraps.

#pragma once

#include <optional>
#include <string>

#include "attribution.hpp"
#include "compile.hpp"
#include "oracle.hpp"

namespace facta {

/// A loaded lineage plus its variable table (ids are table-relative).
struct Instance {
  VarTable vars;
  Lineage lineage;
  std::string source;  // file name or "<string>"; report metadata only

  bool is_dnf() const { return std::holds_alternative<DnfFormula>(lineage); }
  const DnfFormula& dnf() const { return std::get<DnfFormula>(lineage); }
  const BnpExpression& bnp() const { return std::get<BnpExpression>(lineage); }
  const std::vector<VarId>& universe() const { return universe_of(lineage); }
};

enum class Method { Gradient, Counts, Oracle };

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct RunOptions {
  Measure measure = Measure::Banzhaf;
  Method method = Method::Gradient;
  bool lift = true;
  double timeout_secs = 0;  // <= 0: no deadline
};

struct ReportRow {
  std::string variable;  // rows are ordered by this name
  std::optional<Rational> banzhaf;
  std::optional<Rational> shapley;
};

struct Report {
  std::vector<ReportRow> rows;

  // metadata
  std::string source;
  std::string kind;    // "dnf" or "aggregate"
  std::string monoid;  // empty for dnf
  std::string method;
  std::string measure;  // "banzhaf" or "shapley"
  bool lifted = true;
  std::size_t universe_size = 0;

  // tree statistics, when the run compiled a single tree
  std::optional<TreeStats> tree;
  std::optional<Rational> root_probability;  // boolean gradient runs

  double compile_seconds = 0;
  double attribution_seconds = 0;
};

/// Runs attribution per the options.
///
/// Dispatch:
///   dnf        x gradient -> lifted compile + gradient passes
///   sum|count  x gradient -> per-term linearity
///   min|max    x gradient -> lifted compile + distribution gradient
///   min|max    x counts   -> per-variable restriction counting
///   anything   x oracle   -> exhaustive enumeration (<= 24 variables)
///   dnf / sum|count x counts -> input error
///
/// Measure::Banzhaf fills the banzhaf column; Measure::Shapley fills both
/// (Banzhaf is a byproduct or cheap extra on every Shapley path) and verifies
/// efficiency: sum of Shapley values = Psi[all true] - Psi[all false],
/// exactly; violation is an internal error.
Report run_attribution(const Instance& inst, const RunOptions& opts);

/// Compiles the instance to a single d-tree (MIN/MAX or dnf). SUM/COUNT has
/// no single-tree form and is rejected with an input error.
DTree compile_instance(const Instance& inst, bool lift, double timeout_secs = 0);

/// Psi at the all-true valuation minus Psi at the all-false valuation
/// (Bottom counting as 0): the exact total Shapley must reproduce.
Rational efficiency_target(const Instance& inst);

}  // namespace facta
