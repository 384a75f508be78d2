// SPDX-License-Identifier: MIT

#include "engine.hpp"

#include <algorithm>
#include <chrono>

namespace facta {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Deadline make_deadline(double timeout_secs) {
  if (timeout_secs <= 0) return Deadline::unlimited();
  auto ms = std::chrono::milliseconds(
      std::max<long long>(1, static_cast<long long>(timeout_secs * 1000.0)));
  return Deadline(ms);
}

void fill_rows(Report& rep, const Instance& inst,
               const std::map<VarId, Rational>* banzhaf,
               const std::map<VarId, Rational>* shapley) {
  for (VarId v : sorted_by_name(inst.universe(), inst.vars)) {
    ReportRow row;
    row.variable = inst.vars.name(v);
    if (banzhaf) row.banzhaf = banzhaf->at(v);
    if (shapley) row.shapley = shapley->at(v);
    rep.rows.push_back(std::move(row));
  }
}

void check_efficiency(const Report& rep, const Instance& inst) {
  Rational total = 0;
  for (const ReportRow& r : rep.rows) {
    FACTA_CHECK(r.shapley.has_value(), "efficiency check needs Shapley values");
    total += *r.shapley;
  }
  FACTA_CHECK(total == efficiency_target(inst),
              "Shapley efficiency violated: values do not sum to the query delta");
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Gradient: return "gradient";
    case Method::Counts: return "counts";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "gradient") return Method::Gradient;
  if (name == "counts") return Method::Counts;
  if (name == "oracle") return Method::Oracle;
  return std::nullopt;
}

Rational efficiency_target(const Instance& inst) {
  Valuation full = inst.universe();  // already sorted by id
  Valuation empty;
  if (inst.is_dnf())
    return Rational(eval_dnf(inst.dnf(), full) ? 1 : 0) -
           Rational(eval_dnf(inst.dnf(), empty) ? 1 : 0);
  return eval_bnp(inst.bnp(), full) - eval_bnp(inst.bnp(), empty);
}

DTree compile_instance(const Instance& inst, bool lift, double timeout_secs) {
  Deadline deadline = make_deadline(timeout_secs);
  CompileOptions copts;
  copts.lift = lift;
  VarTable vars = inst.vars;  // lifting interns fresh names; work on a copy
  if (inst.is_dnf()) return compile_dnf(inst.dnf(), vars, copts, deadline);
  return compile_bnp(inst.bnp(), vars, copts, deadline);
}

Report run_attribution(const Instance& inst, const RunOptions& opts) {
  Report rep;
  rep.source = inst.source;
  rep.kind = inst.is_dnf() ? "dnf" : "aggregate";
  if (!inst.is_dnf()) rep.monoid = monoid_name(inst.bnp().monoid);
  rep.method = method_name(opts.method);
  rep.measure = opts.measure == Measure::Banzhaf ? "banzhaf" : "shapley";
  rep.lifted = opts.lift;
  rep.universe_size = inst.universe().size();

  Deadline deadline = make_deadline(opts.timeout_secs);
  CompileOptions copts;
  copts.lift = opts.lift;
  const bool wantShapley = opts.measure == Measure::Shapley;

  if (opts.method == Method::Oracle) {
    Clock::time_point t0 = Clock::now();
    BruteAttribution ba = brute_attribution(inst.lineage, inst.vars, deadline);
    rep.attribution_seconds = seconds_since(t0);
    fill_rows(rep, inst, &ba.banzhaf, &ba.shapley);
    check_efficiency(rep, inst);
    return rep;
  }

  if (inst.is_dnf()) {
    if (opts.method == Method::Counts)
      throw InputError("method 'counts' applies to MIN/MAX aggregates only");
    VarTable vars = inst.vars;
    Clock::time_point t0 = Clock::now();
    DTree tree = compile_dnf(inst.dnf(), vars, copts, deadline);
    rep.compile_seconds = seconds_since(t0);
    rep.tree = tree_stats(tree);
    t0 = Clock::now();
    BanzhafRun run = gradient_banzhaf(tree, inst.universe(), deadline);
    rep.root_probability = run.root_probability;
    std::map<VarId, Rational> shapley;
    if (wantShapley) shapley = gradient_shapley(tree, inst.universe(), deadline);
    rep.attribution_seconds = seconds_since(t0);
    fill_rows(rep, inst, &run.attribution, wantShapley ? &shapley : nullptr);
    if (wantShapley) check_efficiency(rep, inst);
    return rep;
  }

  const BnpExpression& e = inst.bnp();
  if (!monoid_idempotent(e.monoid)) {
    if (opts.method == Method::Counts)
      throw InputError("method 'counts' applies to MIN/MAX aggregates only");
    VarTable vars = inst.vars;
    Clock::time_point t0 = Clock::now();
    std::map<VarId, Rational> banzhaf =
        linear_aggregate_attribution(e, Measure::Banzhaf, vars, copts, deadline);
    std::map<VarId, Rational> shapley;
    if (wantShapley)
      shapley = linear_aggregate_attribution(e, Measure::Shapley, vars, copts,
                                             deadline);
    rep.attribution_seconds = seconds_since(t0);
    fill_rows(rep, inst, &banzhaf, wantShapley ? &shapley : nullptr);
    if (wantShapley) check_efficiency(rep, inst);
    return rep;
  }

  if (opts.method == Method::Counts) {
    VarTable vars = inst.vars;
    Clock::time_point t0 = Clock::now();
    std::map<VarId, Rational> banzhaf =
        minmax_attribution_counts(e, Measure::Banzhaf, vars, copts, deadline);
    std::map<VarId, Rational> shapley;
    if (wantShapley)
      shapley =
          minmax_attribution_counts(e, Measure::Shapley, vars, copts, deadline);
    rep.attribution_seconds = seconds_since(t0);
    fill_rows(rep, inst, &banzhaf, wantShapley ? &shapley : nullptr);
    if (wantShapley) check_efficiency(rep, inst);
    return rep;
  }

  VarTable vars = inst.vars;
  Clock::time_point t0 = Clock::now();
  DTree tree = compile_bnp(e, vars, copts, deadline);
  rep.compile_seconds = seconds_since(t0);
  rep.tree = tree_stats(tree);
  t0 = Clock::now();
  std::map<VarId, Rational> banzhaf =
      minmax_gradient(tree, e.monoid, e.universe, Measure::Banzhaf, deadline);
  std::map<VarId, Rational> shapley;
  if (wantShapley)
    shapley =
        minmax_gradient(tree, e.monoid, e.universe, Measure::Shapley, deadline);
  rep.attribution_seconds = seconds_since(t0);
  fill_rows(rep, inst, &banzhaf, wantShapley ? &shapley : nullptr);
  if (wantShapley) check_efficiency(rep, inst);
  return rep;
}

}  // namespace facta
