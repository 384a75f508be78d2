// SPDX-License-Identifier: MIT
//
// Lifted compilation of (possibly lifted) positive DNF into d-trees.
//
// Recursive strategy on the canonical working formula:
//   1. constants              -> Const leaves
//   2. single variable        -> expand its binding
//   3. independent components -> IndOr over the components
//   4. common variables       -> IndAnd of their expansions + the residue
//      (a single clause is the degenerate case: all variables are common)
//   5. otherwise Shannon-expand on the most frequent variable (ties broken by
//      lexicographically smallest name; ValueTerm-bound variables are never
//      chosen). Both residues are re-lifted before compilation; the condition
//      is the picked variable's binding, expanded read-once.
//
// Sub-formulas are memoized on a *semantic* key (clauses rendered through
// their bindings down to original variables), so identical residues anywhere
// in the recursion share one node and the arena forms a DAG. Reported sizes
// stay tree-semantics (see tree_stats).

#pragma once

#include "dtree.hpp"
#include "lifting.hpp"

namespace facta {

struct CompileOptions {
  bool lift = true;  // false: canonicalize only (no merges, identity bindings)
};

/// Boolean lineage -> boolean d-tree.
DTree compile_dnf(const DnfFormula& f, VarTable& vars,
                  const CompileOptions& opts = {},
                  const Deadline& deadline = Deadline::unlimited());

/// MIN/MAX lineage -> semimodule d-tree (the tree records the monoid).
/// SUM/COUNT is rejected here: those are attributed linearly per term.
DTree compile_bnp(const BnpExpression& e, VarTable& vars,
                  const CompileOptions& opts = {},
                  const Deadline& deadline = Deadline::unlimited());

/// Expands a read-once formula into IndOr/IndAnd/Var nodes.
NodeId expand_readonce(DTree& t, const RoNode& ro);

}  // namespace facta
