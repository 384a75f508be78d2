// SPDX-License-Identifier: MIT

#include "lineage.hpp"

#include <algorithm>

namespace facta {

VarId VarTable::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  FACTA_CHECK(!name.empty(), "variable name must be non-empty");
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

std::optional<VarId> VarTable::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& VarTable::name(VarId id) const {
  FACTA_CHECK(id < names_.size(), "variable id out of range");
  return names_[id];
}

bool is_valid_var_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.' || c == ':' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void normalize_clause(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
}

bool clause_subset(const Clause& a, const Clause& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool clause_contains(const Clause& c, VarId v) {
  return std::binary_search(c.begin(), c.end(), v);
}

std::vector<VarId> formula_vars(const DnfFormula& f) {
  std::vector<VarId> out;
  for (const Clause& c : f.clauses) out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DnfFormula canonicalize(const DnfFormula& f, const VarTable& vars) {
  DnfFormula out;
  out.universe = f.universe;
  // Constant-true short circuit: an empty clause absorbs everything.
  for (const Clause& c : f.clauses) {
    if (c.empty()) {
      out.clauses.push_back({});
      return out;
    }
  }
  std::vector<Clause> cls = f.clauses;
  for (Clause& c : cls) normalize_clause(c);
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  // Absorption: drop any clause that is a strict superset of another clause.
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < cls.size() && !subsumed; ++j) {
      if (i == j) continue;
      if (cls[j].size() < cls[i].size() && clause_subset(cls[j], cls[i])) subsumed = true;
      // Equal-size distinct clauses never subsume each other; duplicates are
      // already removed.
    }
    if (!subsumed) kept.push_back(cls[i]);
  }
  // Deterministic, user-facing order: name-lexicographic over the clause's
  // name sequence.
  std::sort(kept.begin(), kept.end(), [&](const Clause& a, const Clause& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& na = vars.name(a[i]);
      const std::string& nb = vars.name(b[i]);
      if (na != nb) return na < nb;
    }
    return a.size() < b.size();
  });
  out.clauses = std::move(kept);
  return out;
}

DnfFormula restrict_dnf(const DnfFormula& f, VarId x, bool value) {
  DnfFormula out;
  out.universe.reserve(f.universe.size());
  for (VarId v : f.universe)
    if (v != x) out.universe.push_back(v);
  for (const Clause& c : f.clauses) {
    if (clause_contains(c, x)) {
      if (!value) continue;  // clause falsified
      Clause trimmed;
      trimmed.reserve(c.size() - 1);
      for (VarId v : c)
        if (v != x) trimmed.push_back(v);
      out.clauses.push_back(std::move(trimmed));
    } else {
      out.clauses.push_back(c);
    }
  }
  return out;
}

bool eval_dnf(const DnfFormula& f, const Valuation& trueVars) {
  for (const Clause& c : f.clauses)
    if (clause_subset(c, trueVars)) return true;
  return false;
}

const char* monoid_name(MonoidKind m) {
  switch (m) {
    case MonoidKind::Sum: return "sum";
    case MonoidKind::Count: return "count";
    case MonoidKind::Min: return "min";
    case MonoidKind::Max: return "max";
  }
  return "?";
}

std::optional<MonoidKind> parse_monoid(const std::string& name) {
  if (name == "SUM" || name == "sum") return MonoidKind::Sum;
  if (name == "COUNT" || name == "count") return MonoidKind::Count;
  if (name == "MIN" || name == "min") return MonoidKind::Min;
  if (name == "MAX" || name == "max") return MonoidKind::Max;
  return std::nullopt;
}

void validate_bnp(const BnpExpression& e, const VarTable& vars) {
  for (const BnpTerm& t : e.terms) {
    if (t.formula.universe != e.universe)
      throw InputError("aggregate terms must share the expression universe");
    for (const Clause& c : t.formula.clauses)
      for (VarId v : c)
        if (!std::binary_search(e.universe.begin(), e.universe.end(), v))
          throw InputError("term mentions variable '" + vars.name(v) +
                           "' outside the universe");
    if (e.monoid == MonoidKind::Count && t.value != 1)
      throw InputError("COUNT terms must all carry value 1");
  }
}

OutcomeValue eval_bnp_outcome(const BnpExpression& e, const Valuation& trueVars) {
  OutcomeValue acc = OutcomeValue::bot();
  for (const BnpTerm& t : e.terms) {
    if (!eval_dnf(t.formula, trueVars)) continue;
    if (acc.bottom) {
      acc = OutcomeValue::of(t.value);
      continue;
    }
    switch (e.monoid) {
      case MonoidKind::Sum:
      case MonoidKind::Count: acc.value += t.value; break;
      case MonoidKind::Min: acc.value = std::min(acc.value, t.value); break;
      case MonoidKind::Max: acc.value = std::max(acc.value, t.value); break;
    }
  }
  return acc;
}

Rational eval_bnp(const BnpExpression& e, const Valuation& trueVars) {
  OutcomeValue o = eval_bnp_outcome(e, trueVars);
  return o.bottom ? Rational(0) : o.value;
}

BnpExpression restrict_bnp(const BnpExpression& e, VarId x, bool value) {
  BnpExpression out;
  out.monoid = e.monoid;
  out.universe.reserve(e.universe.size());
  for (VarId v : e.universe)
    if (v != x) out.universe.push_back(v);
  for (const BnpTerm& t : e.terms) {
    BnpTerm rt;
    rt.value = t.value;
    rt.formula = restrict_dnf(t.formula, x, value);
    rt.formula.universe = out.universe;
    out.terms.push_back(std::move(rt));
  }
  return out;
}

std::vector<VarId> sorted_by_name(std::vector<VarId> ids, const VarTable& vars) {
  std::sort(ids.begin(), ids.end(),
            [&](VarId a, VarId b) { return vars.name_less(a, b); });
  return ids;
}

}  // namespace facta
