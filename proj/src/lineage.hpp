// SPDX-License-Identifier: MIT
//
// Core lineage model: variables, positive DNF formulas, and aggregate
// expressions (a bag of DNF-guarded monoid values).
//
// Conventions used throughout the engine:
//  - Variables are interned in a per-instance VarTable; a VarId is an index.
//  - A clause is a duplicate-free vector of VarIds sorted by id (set
//    semantics; subset tests run on the sorted vectors).
//  - A formula carries an explicit universe: the variable set attribution is
//    computed over. It always contains every variable mentioned by a clause
//    and may be strictly larger (variables that never made it into the
//    lineage still carry attribution 0 and participate in normalization).
//  - All user-facing determinism (clause ordering, report rows, fresh names)
//    is by variable *name*, not id.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "common.hpp"
#include "rational.hpp"

namespace facta {

using VarId = std::uint32_t;

/// Name <-> id interner. Original (user) names are validated at the I/O
/// boundary; lifting registers fresh names containing the reserved '|'
/// separator, which guarantees they can never collide with user names.
class VarTable {
 public:
  VarId intern(const std::string& name);
  std::optional<VarId> find(const std::string& name) const;
  const std::string& name(VarId id) const;
  std::size_t size() const { return names_.size(); }

  /// Comparator for name-lexicographic ordering of ids.
  bool name_less(VarId a, VarId b) const { return name(a) < name(b); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

/// True iff `name` is acceptable as a user-supplied variable name:
/// non-empty, characters in [A-Za-z0-9_.:-].
bool is_valid_var_name(const std::string& name);

using Clause = std::vector<VarId>;  // sorted by id, duplicate-free

/// Sorts and deduplicates in place.
void normalize_clause(Clause& c);
/// True iff a (as a set) is a subset of b; both sorted by id.
bool clause_subset(const Clause& a, const Clause& b);
/// True iff the clause contains `v`.
bool clause_contains(const Clause& c, VarId v);

struct DnfFormula {
  std::vector<Clause> clauses;
  std::vector<VarId> universe;  // sorted by id; superset of all clause vars
};

/// Sorted (by id) union of all clause variables.
std::vector<VarId> formula_vars(const DnfFormula& f);

/// Canonical form: clauses deduplicated as sets, subsumed clauses removed
/// (a clause that is a superset of another clause is absorbed), clause list
/// ordered name-lexicographically. A formula containing an empty clause
/// canonicalizes to the single empty clause (constant true); a formula with
/// no clauses is constant false. The universe is preserved.
DnfFormula canonicalize(const DnfFormula& f, const VarTable& vars);

/// phi[x := value]. Removes x from the universe. With value = true, x is
/// deleted from every clause; with value = false, clauses containing x are
/// dropped.
DnfFormula restrict_dnf(const DnfFormula& f, VarId x, bool value);

/// Valuation = sorted set of true variables.
using Valuation = std::vector<VarId>;

bool eval_dnf(const DnfFormula& f, const Valuation& trueVars);

// ---------------------------------------------------------------------------
// Aggregates
// ---------------------------------------------------------------------------

enum class MonoidKind { Sum, Count, Min, Max };

const char* monoid_name(MonoidKind m);
std::optional<MonoidKind> parse_monoid(const std::string& name);
inline bool monoid_idempotent(MonoidKind m) {
  return m == MonoidKind::Min || m == MonoidKind::Max;
}

/// Outcome of evaluating an aggregate: either a monoid value or Bottom (no
/// term satisfied). Bottom maps to 0 only at the numeric boundary
/// (eval_bnp / attribution); outcome *distributions* keep it distinct.
struct OutcomeValue {
  bool bottom = true;
  Rational value;  // meaningful iff !bottom

  static OutcomeValue bot() { return OutcomeValue{}; }
  static OutcomeValue of(Rational v) { return OutcomeValue{false, std::move(v)}; }

  bool operator==(const OutcomeValue& o) const {
    return bottom == o.bottom && (bottom || value == o.value);
  }
  bool operator!=(const OutcomeValue& o) const { return !(*this == o); }
  // Bottom sorts below every value; values by numeric order.
  bool operator<(const OutcomeValue& o) const {
    if (bottom != o.bottom) return bottom;
    if (bottom) return false;
    return value < o.value;
  }
  std::string str() const { return bottom ? "bottom" : format_exact(value); }
};

struct BnpTerm {
  DnfFormula formula;  // shares the expression universe
  Rational value;
};

/// Bag of (guard formula, value) pairs combined by the monoid operation over
/// the satisfied terms' values.
struct BnpExpression {
  MonoidKind monoid = MonoidKind::Sum;
  std::vector<BnpTerm> terms;
  std::vector<VarId> universe;  // sorted by id
};

/// Structural invariants: term universes equal the expression universe, all
/// clause vars covered, COUNT values all 1. Throws InputError.
void validate_bnp(const BnpExpression& e, const VarTable& vars);

/// Monoid fold over the values of satisfied terms; Bottom if none.
OutcomeValue eval_bnp_outcome(const BnpExpression& e, const Valuation& trueVars);
/// Same, with Bottom mapped to 0.
Rational eval_bnp(const BnpExpression& e, const Valuation& trueVars);

/// Phi[x := value] applied to every term; removes x from the universe.
BnpExpression restrict_bnp(const BnpExpression& e, VarId x, bool value);

// ---------------------------------------------------------------------------
// Instance = either flavor of lineage plus its variable table.
// ---------------------------------------------------------------------------

using Lineage = std::variant<DnfFormula, BnpExpression>;

inline const std::vector<VarId>& universe_of(const Lineage& l) {
  if (std::holds_alternative<DnfFormula>(l)) return std::get<DnfFormula>(l).universe;
  return std::get<BnpExpression>(l).universe;
}

/// Ids sorted name-lexicographically (deterministic user-facing order).
std::vector<VarId> sorted_by_name(std::vector<VarId> ids, const VarTable& vars);

}  // namespace facta
