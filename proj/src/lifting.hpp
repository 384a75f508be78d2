// SPDX-License-Identifier: MIT
//
// Lifting: rewriting a positive DNF over "lifted" variables, each bound to a
// read-once formula (or a guarded monoid value) over the original variables.
//
// Two rewrites shrink the formula while preserving its meaning:
//   lift-or   merges a cofactor-equivalent class {y1..yk} (identical sets of
//             co-clauses) into one fresh variable bound to l(y1) v .. v l(yk);
//   lift-and  merges an interchangeable class (identical clause membership)
//             into one fresh variable bound to l(y1) ^ .. ^ l(yk).
// Saturating these to a fixpoint keeps three invariants (checked in tests):
// inlining bindings restores an equivalent formula, bindings are pairwise
// disjoint over original variables, and every binding is read-once.
//
// Fresh names are the sorted member names joined by '|' (reserved, so they
// never collide with user names). Within one working formula every variable
// has exactly one binding; bindings are immutable once created.

#pragma once

#include <unordered_map>
#include <vector>

#include "lineage.hpp"

namespace facta {

/// Positive read-once formula over original variables.
struct RoNode {
  enum class Kind { Var, And, Or } kind = Kind::Var;
  VarId var{};                    // Kind::Var
  std::vector<RoNode> children;   // Kind::And / Kind::Or (size >= 1)
};

RoNode ro_var(VarId v);
RoNode ro_and(std::vector<RoNode> kids);  // single child collapses to itself
RoNode ro_or(std::vector<RoNode> kids);

std::vector<VarId> ro_vars(const RoNode& n);        // sorted by id
bool ro_read_once(const RoNode& n);                 // pairwise-disjoint subtrees
bool eval_ro(const RoNode& n, const Valuation& trueVars);
/// Canonical serialization over original variable names (used as a semantic
/// memo key by the compiler).
std::string ro_key(const RoNode& n, const VarTable& vars);

/// What a lifted variable stands for.
struct Binding {
  enum class Kind { Formula, ValueTerm } kind = Kind::Formula;
  RoNode formula;      // Formula: the whole formula. ValueTerm: the guard;
                       // a guard with zero children (And of []) is trivially true.
  Rational value;      // ValueTerm only
  std::vector<VarId> original_vars;  // cached ro_vars(formula), sorted by id

  bool trivial_guard() const {
    return kind == Kind::ValueTerm && formula.kind == RoNode::Kind::And &&
           formula.children.empty();
  }
};

Binding formula_binding(RoNode f);
Binding value_binding(RoNode guard, Rational value);

/// Working state: a canonical DNF over lifted variables plus their bindings.
struct LiftedFormula {
  DnfFormula formula;  // universe == vars present in clauses
  std::unordered_map<VarId, Binding> bindings;
};

/// Identity-bound lifted view of a plain DNF (canonicalized).
LiftedFormula identity_lifted(const DnfFormula& f, const VarTable& vars);

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// Maximal classes of cofactor-equivalent variables (including singletons):
/// x ~ y iff { C \ {x} : x in C } == { C \ {y} : y in C } as clause sets.
/// Classes are ordered by the name of their name-smallest member; members are
/// name-sorted.
std::vector<std::vector<VarId>> cofactor_partition(const DnfFormula& f,
                                                   const VarTable& vars);

/// Maximal classes of interchangeable variables (identical clause
/// membership), same ordering conventions.
std::vector<std::vector<VarId>> interchangeable_partition(const DnfFormula& f,
                                                          const VarTable& vars);

// ---------------------------------------------------------------------------
// Rewrites
// ---------------------------------------------------------------------------

/// Applies one lift-or step for class `members` (>= 2 variables, all
/// Formula-bound, cofactor-equivalent in lf.formula). Throws InternalError on
/// contract violation.
void lift_or(LiftedFormula& lf, VarTable& vars, const std::vector<VarId>& members);

/// Applies one lift-and step for class `members` (>= 2 variables,
/// interchangeable in lf.formula, at most one ValueTerm member).
void lift_and(LiftedFormula& lf, VarTable& vars, const std::vector<VarId>& members);

/// Saturates lf: per pass, every currently-valid lift-or class, then every
/// currently-valid lift-and class (classes recomputed per pass, preconditions
/// re-verified immediately before each rewrite), until a pass changes
/// nothing. Each rewrite strictly decreases the variable count.
void saturate(LiftedFormula& lf, VarTable& vars, const Deadline& deadline);

/// lift = identity bindings + saturate.
LiftedFormula lift(const DnfFormula& f, VarTable& vars,
                   const Deadline& deadline = Deadline::unlimited());

/// True iff no applicable lift-or / lift-and class of size > 1 remains.
bool is_saturated(const LiftedFormula& lf, const VarTable& vars);

// ---------------------------------------------------------------------------
// Aggregate translation
// ---------------------------------------------------------------------------

/// Flattens an idempotent-monoid (MIN/MAX) aggregate into a lifted DNF:
/// each (clause, term) pair becomes clause + {w_v} where w_v is the fresh
/// ValueTerm variable for the term's value v (one per *distinct* value, so
/// equal-valued clauses share it). Every clause then carries exactly one
/// ValueTerm variable. Does not saturate.
LiftedFormula bnp_to_lifted(const BnpExpression& e, VarTable& vars);

/// Evaluates a lifted formula against a valuation of the original variables
/// by inlining bindings (ValueTerm variables evaluate their guards).
bool eval_lifted(const LiftedFormula& lf, const Valuation& trueVars);

/// Invariant bundle used by tests: every formula variable bound, bindings
/// pairwise disjoint over originals, every binding read-once.
void check_lifted_invariants(const LiftedFormula& lf, const VarTable& vars);

}  // namespace facta
