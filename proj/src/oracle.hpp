// SPDX-License-Identifier: MIT
//
// Brute-force reference oracle. Enumerates every valuation of the universe
// (hard-capped at 24 variables) and derives attribution values and count
// statistics directly from the definitions. Intentionally simple: this is the
// ground truth the fast paths are validated against.

#pragma once

#include <map>
#include <vector>

#include "lineage.hpp"

namespace facta {

inline constexpr std::size_t kOracleMaxVars = 24;

struct BruteCounts {
  // Boolean lineage: model counts.
  BigInt model_count = 0;
  std::vector<BigInt> k_counts;  // k_counts[k] = #models of size k

  // Aggregate lineage: outcome distributions (Bottom included).
  std::map<OutcomeValue, BigInt> outcome_counts;
  std::map<OutcomeValue, std::vector<BigInt>> k_outcome_counts;
};

/// Per-variable attribution from the definitions.
struct BruteAttribution {
  std::map<VarId, Rational> banzhaf;
  std::map<VarId, Rational> shapley;
};

/// Enumerates 2^|universe| valuations. Throws InputError when the universe
/// exceeds kOracleMaxVars (the refusal is deliberate: beyond that the oracle
/// would silently burn hours).
BruteCounts brute_counts(const Lineage& lineage, const VarTable& vars,
                         const Deadline& deadline = Deadline::unlimited());

/// Banzhaf and Shapley for every universe variable in one enumeration.
BruteAttribution brute_attribution(const Lineage& lineage, const VarTable& vars,
                                   const Deadline& deadline = Deadline::unlimited());

/// Convenience single-variable forms.
Rational brute_banzhaf(const Lineage& lineage, const VarTable& vars, VarId x);
Rational brute_shapley(const Lineage& lineage, const VarTable& vars, VarId x);

/// Exact Shapley coefficients C[k] = k! (n-k-1)! / n! for k = 0..n-1.
std::vector<Rational> shapley_coefficients(std::size_t n);

}  // namespace facta
