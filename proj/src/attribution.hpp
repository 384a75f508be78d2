// SPDX-License-Identifier: MIT
//
// Attribution passes over compiled d-trees.
//
// Boolean lineage:
//   gradient_banzhaf   one bottom-up probability pass (all leaves at 1/2) and
//                      one top-down gradient pass; Banzhaf(x) is the sum of
//                      leaf gradients of x. Exact integers.
//   gradient_shapley   same two-pass shape on size-resolved model-count
//                      vectors; per variable x the back-propagated vector is
//                      delta_k(x) = #_k(phi[x:=1]) - #_k(phi[x:=0]) counted
//                      over vars(T)\{x}; Shapley(x) = sum_k C[k] * delta_k(x)
//                      after padding to the universe. Exact rationals.
//
// SUM/COUNT aggregates: linear_aggregate_attribution combines per-term
// boolean runs weighted by the term values (all measured over the shared
// universe).
//
// MIN/MAX aggregates (semimodule trees):
//   value_counts            per-node outcome distributions (how many
//                           valuations of the node's variables yield each
//                           value / Bottom), optionally size-resolved.
//   minmax_attribution_counts  reference method: per variable, recompile both
//                           restrictions and combine their root
//                           distributions.
//   minmax_gradient         single compilation; reverse-mode pass through the
//                           distribution recurrences.
//
// Every quantity is exact; nothing here rounds.

#pragma once

#include <map>
#include <optional>

#include "compile.hpp"
#include "dtree.hpp"
#include "oracle.hpp"  // shapley_coefficients

namespace facta {

enum class Measure { Banzhaf, Shapley };

using KVec = std::vector<BigInt>;

/// Full convolution, size a+b-1.
KVec conv(const KVec& a, const KVec& b);
/// Correlation against a sensitivity vector: out[j] = sum_k s[k] * b[k-j],
/// for j = 0..outLen-1 (the transpose map of "convolve with b").
std::vector<Rational> corr(const std::vector<Rational>& s, const KVec& b,
                           std::size_t outLen);

// ---------------------------------------------------------------------------
// Boolean passes
// ---------------------------------------------------------------------------

/// Model counts of every reachable boolean node (semimodule entries unused).
std::vector<BigInt> boolean_counts(const DTree& t, const Deadline& deadline);

/// Size-resolved model counts (vector index = model size over node vars).
std::vector<KVec> boolean_kcounts(const DTree& t, const Deadline& deadline);

struct BanzhafRun {
  std::map<VarId, Rational> attribution;  // integral values
  std::vector<Rational> node_p;           // per node: probability at all-1/2
  std::vector<Rational> node_g;           // per node: accumulated gradient
  Rational root_probability;
};

/// universe must contain vars(T); extra universe variables get 0.
BanzhafRun gradient_banzhaf(const DTree& t, const std::vector<VarId>& universe,
                            const Deadline& deadline = Deadline::unlimited());

std::map<VarId, Rational> gradient_shapley(const DTree& t,
                                           const std::vector<VarId>& universe,
                                           const Deadline& deadline = Deadline::unlimited());

/// Root probability with every leaf at 1/2 except `fixed` (when given) pinned
/// to 0 or 1. Backbone of the naive per-variable baseline the gradient pass
/// is benchmarked against.
Rational root_probability_with(const DTree& t,
                               std::optional<std::pair<VarId, bool>> fixed,
                               const Deadline& deadline = Deadline::unlimited());

// ---------------------------------------------------------------------------
// SUM / COUNT
// ---------------------------------------------------------------------------

std::map<VarId, Rational> linear_aggregate_attribution(
    const BnpExpression& e, Measure measure, VarTable& vars,
    const CompileOptions& copts = {}, const Deadline& deadline = Deadline::unlimited());

// ---------------------------------------------------------------------------
// MIN / MAX
// ---------------------------------------------------------------------------

/// Outcome distribution of one node: counts per produced value plus Bottom.
/// Invariant: total mass = 2^|vars(node)|.
using OutcomeDist = std::map<OutcomeValue, BigInt>;
/// Size-resolved variant: per outcome, counts by valuation size.
using KOutcomeDist = std::map<OutcomeValue, KVec>;

struct ValueCountsResult {
  /// Indexed by NodeId; engaged for semimodule nodes reachable from the root.
  std::vector<std::optional<OutcomeDist>> per_node;
  OutcomeDist root;
};

struct KValueCountsResult {
  std::vector<std::optional<KOutcomeDist>> per_node;
  KOutcomeDist root;
};

ValueCountsResult value_counts(const DTree& t,
                               const Deadline& deadline = Deadline::unlimited());
KValueCountsResult value_counts_k(const DTree& t,
                                  const Deadline& deadline = Deadline::unlimited());

/// Reference method: per universe variable, compile both restrictions of the
/// expression and combine their root distributions.
std::map<VarId, Rational> minmax_attribution_counts(
    const BnpExpression& e, Measure measure, VarTable& vars,
    const CompileOptions& copts = {}, const Deadline& deadline = Deadline::unlimited());

/// Gradient method on one compiled tree.
std::map<VarId, Rational> minmax_gradient(const DTree& t, MonoidKind monoid,
                                          const std::vector<VarId>& universe,
                                          Measure measure,
                                          const Deadline& deadline = Deadline::unlimited());

}  // namespace facta
