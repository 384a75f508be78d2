// SPDX-License-Identifier: MIT
//
// Decomposition trees (d-trees): the compiled representation attribution is
// computed on. Node kinds and their structural contracts:
//
//   Const0 / Const1   boolean constants (Const0 doubles as Bottom in
//                     semimodule context: "no value produced")
//   Var               boolean leaf for one original variable
//   Value             semimodule leaf holding an exact rational
//   IndOr     (+)     children over pairwise-disjoint variable sets, all
//                     boolean or all semimodule
//   IndAnd    (.)     boolean children over pairwise-disjoint variable sets
//   Shannon   (|>)    [condition, high, low]; the condition's variables are
//                     disjoint from both branches (the branches may share
//                     variables with each other); boolean or semimodule
//                     according to the branches
//   ScalarMul (x)     boolean children plus one semimodule child (last)
//
// Nodes live in an arena in topological order (children precede parents).
// Builders memoize on structure, so identical subtrees share one node and the
// arena is really a DAG; size statistics are reported in tree semantics
// (multiplicity-weighted) with the DAG size alongside.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lineage.hpp"

namespace facta {

enum class DKind : std::uint8_t {
  Const0,
  Const1,
  Var,
  Value,
  IndOr,
  IndAnd,
  Shannon,
  ScalarMul,
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct DNode {
  DKind kind = DKind::Const0;
  VarId var{};                    // Var
  Rational value;                 // Value
  std::vector<NodeId> children;   // see kind contracts above
  std::vector<VarId> vars;        // cached: original variables, sorted by id
  bool semimodule = false;        // carries monoid values (vs boolean)
};

class DTree {
 public:
  NodeId mk_const(bool one);
  NodeId mk_var(VarId v);
  NodeId mk_value(const Rational& v);
  /// children >= 1, pairwise-disjoint var sets, uniform flavor. Drops
  /// neutral constants (Const0 for boolean-or; Const0/Bottom for
  /// semimodule-or); collapses to the single remaining child.
  NodeId mk_indor(std::vector<NodeId> children);
  /// boolean children >= 1, pairwise disjoint. Drops Const1; Const0 wins.
  NodeId mk_indand(std::vector<NodeId> children);
  /// condition boolean; branches uniform flavor; condition vars disjoint
  /// from branch vars. Identical branches collapse to the branch.
  NodeId mk_shannon(NodeId condition, NodeId high, NodeId low);
  /// booleans may be empty (then this is just the module child).
  NodeId mk_scalarmul(std::vector<NodeId> booleans, NodeId module);

  const DNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t dag_size() const { return nodes_.size(); }

  NodeId root = kNoNode;
  MonoidKind monoid = MonoidKind::Max;  // semimodule trees only

  const std::vector<DNode>& nodes() const { return nodes_; }

  /// Ids reachable from the root, ascending (children before parents).
  std::vector<NodeId> reachable() const;

 private:
  NodeId add(DNode n);
  std::vector<DNode> nodes_;
  std::unordered_map<std::string, NodeId> memo_;
};

struct TreeStats {
  BigInt size = 0;            // node count, tree semantics
  std::size_t dag_size = 0;   // distinct nodes reachable from the root
  std::size_t depth = 0;      // edges on the longest root-to-leaf path
  BigInt shannon_count = 0;   // Shannon nodes, tree semantics
  std::size_t var_count = 0;  // |vars(root)|
  std::map<DKind, BigInt> gate_histogram;  // per kind, tree semantics
};

TreeStats tree_stats(const DTree& t);

/// Short stable name of a node kind ("var", "indor", ...), for reports.
const char* dkind_name(DKind k);

/// Evaluates the tree under a valuation of the original variables.
/// Boolean tree: value 0/1. Semimodule tree: the produced outcome (Bottom
/// when no value reaches the root).
OutcomeValue eval_dtree(const DTree& t, const Valuation& trueVars);

/// Structural invariant sweep (child flavors, disjointness, Shannon shape).
/// Used by tests and after compilation; throws InternalError on violation.
void check_dtree_invariants(const DTree& t);

}  // namespace facta
