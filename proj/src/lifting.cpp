// SPDX-License-Identifier: MIT

#include "lifting.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace facta {

// ---------------------------------------------------------------------------
// Read-once formulas
// ---------------------------------------------------------------------------

RoNode ro_var(VarId v) {
  RoNode n;
  n.kind = RoNode::Kind::Var;
  n.var = v;
  return n;
}

RoNode ro_and(std::vector<RoNode> kids) {
  if (kids.size() == 1) return std::move(kids[0]);
  RoNode n;
  n.kind = RoNode::Kind::And;
  n.children = std::move(kids);
  return n;
}

RoNode ro_or(std::vector<RoNode> kids) {
  FACTA_CHECK(!kids.empty(), "ro_or needs at least one child");
  if (kids.size() == 1) return std::move(kids[0]);
  RoNode n;
  n.kind = RoNode::Kind::Or;
  n.children = std::move(kids);
  return n;
}

static void collect_ro_vars(const RoNode& n, std::vector<VarId>& out) {
  if (n.kind == RoNode::Kind::Var) {
    out.push_back(n.var);
    return;
  }
  for (const RoNode& k : n.children) collect_ro_vars(k, out);
}

std::vector<VarId> ro_vars(const RoNode& n) {
  std::vector<VarId> out;
  collect_ro_vars(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool ro_read_once(const RoNode& n) {
  if (n.kind == RoNode::Kind::Var) return true;
  std::set<VarId> seen;
  for (const RoNode& k : n.children) {
    if (!ro_read_once(k)) return false;
    for (VarId v : ro_vars(k)) {
      if (!seen.insert(v).second) return false;  // shared variable
    }
  }
  return true;
}

bool eval_ro(const RoNode& n, const Valuation& trueVars) {
  switch (n.kind) {
    case RoNode::Kind::Var:
      return std::binary_search(trueVars.begin(), trueVars.end(), n.var);
    case RoNode::Kind::And:
      for (const RoNode& k : n.children)
        if (!eval_ro(k, trueVars)) return false;
      return true;
    case RoNode::Kind::Or:
      for (const RoNode& k : n.children)
        if (eval_ro(k, trueVars)) return true;
      return false;
  }
  return false;
}

std::string ro_key(const RoNode& n, const VarTable& vars) {
  switch (n.kind) {
    case RoNode::Kind::Var: return vars.name(n.var);
    case RoNode::Kind::And:
    case RoNode::Kind::Or: {
      std::vector<std::string> keys;
      keys.reserve(n.children.size());
      for (const RoNode& k : n.children) keys.push_back(ro_key(k, vars));
      std::sort(keys.begin(), keys.end());
      std::string out = n.kind == RoNode::Kind::And ? "(&" : "(+";
      for (const std::string& k : keys) {
        out += ' ';
        out += k;
      }
      out += ')';
      return out;
    }
  }
  return "?";
}

Binding formula_binding(RoNode f) {
  Binding b;
  b.kind = Binding::Kind::Formula;
  b.original_vars = ro_vars(f);
  b.formula = std::move(f);
  return b;
}

Binding value_binding(RoNode guard, Rational value) {
  Binding b;
  b.kind = Binding::Kind::ValueTerm;
  b.original_vars = ro_vars(guard);
  b.formula = std::move(guard);
  b.value = std::move(value);
  return b;
}

LiftedFormula identity_lifted(const DnfFormula& f, const VarTable& vars) {
  LiftedFormula lf;
  lf.formula = canonicalize(f, vars);
  lf.formula.universe = formula_vars(lf.formula);
  for (VarId v : lf.formula.universe) lf.bindings.emplace(v, formula_binding(ro_var(v)));
  return lf;
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

namespace {

// Sorted clause-set cofactor of x: { C \ {x} : x in C }.
std::vector<Clause> cofactor_of(const DnfFormula& f, VarId x) {
  std::vector<Clause> out;
  for (const Clause& c : f.clauses) {
    if (!clause_contains(c, x)) continue;
    Clause rest;
    rest.reserve(c.size() - 1);
    for (VarId v : c)
      if (v != x) rest.push_back(v);
    out.push_back(std::move(rest));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<VarId>> order_classes(
    std::vector<std::vector<VarId>> classes, const VarTable& vars) {
  for (auto& cls : classes)
    cls = sorted_by_name(std::move(cls), vars);
  std::sort(classes.begin(), classes.end(),
            [&](const std::vector<VarId>& a, const std::vector<VarId>& b) {
              return vars.name(a.front()) < vars.name(b.front());
            });
  return classes;
}

}  // namespace

std::vector<std::vector<VarId>> cofactor_partition(const DnfFormula& f,
                                                   const VarTable& vars) {
  std::map<std::vector<Clause>, std::vector<VarId>> groups;
  for (VarId v : formula_vars(f)) groups[cofactor_of(f, v)].push_back(v);
  std::vector<std::vector<VarId>> classes;
  classes.reserve(groups.size());
  for (auto& [key, members] : groups) classes.push_back(std::move(members));
  return order_classes(std::move(classes), vars);
}

std::vector<std::vector<VarId>> interchangeable_partition(const DnfFormula& f,
                                                          const VarTable& vars) {
  std::map<std::vector<std::size_t>, std::vector<VarId>> groups;
  std::map<VarId, std::vector<std::size_t>> membership;
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    for (VarId v : f.clauses[i]) membership[v].push_back(i);
  for (auto& [v, idx] : membership) groups[idx].push_back(v);
  std::vector<std::vector<VarId>> classes;
  classes.reserve(groups.size());
  for (auto& [key, members] : groups) classes.push_back(std::move(members));
  return order_classes(std::move(classes), vars);
}

// ---------------------------------------------------------------------------
// Rewrites
// ---------------------------------------------------------------------------

namespace {

std::string joined_name(const std::vector<VarId>& members, const VarTable& vars) {
  std::vector<std::string> names;
  names.reserve(members.size());
  for (VarId v : members) names.push_back(vars.name(v));
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += '|';
    out += names[i];
  }
  return out;
}

// Replaces every clause intersecting `members` by (clause \ members) + fresh,
// deduplicates, re-canonicalizes, erases member bindings.
void rewrite_clauses(LiftedFormula& lf, const VarTable& vars,
                     const std::vector<VarId>& members, VarId fresh) {
  std::vector<VarId> sortedMembers = members;
  std::sort(sortedMembers.begin(), sortedMembers.end());
  for (Clause& c : lf.formula.clauses) {
    bool touched = false;
    Clause next;
    next.reserve(c.size());
    for (VarId v : c) {
      if (std::binary_search(sortedMembers.begin(), sortedMembers.end(), v))
        touched = true;
      else
        next.push_back(v);
    }
    if (touched) {
      next.push_back(fresh);
      normalize_clause(next);
      c = std::move(next);
    }
  }
  lf.formula = canonicalize(lf.formula, vars);
  lf.formula.universe = formula_vars(lf.formula);
  for (VarId v : members) lf.bindings.erase(v);
}

void check_members_known(const LiftedFormula& lf, const std::vector<VarId>& members) {
  FACTA_CHECK(members.size() >= 2, "lift class needs at least two members");
  for (VarId v : members)
    FACTA_CHECK(lf.bindings.count(v) != 0, "lift class member has no binding");
}

std::vector<VarId> disjoint_union(const std::vector<const Binding*>& bindings) {
  std::vector<VarId> all;
  for (const Binding* b : bindings)
    all.insert(all.end(), b->original_vars.begin(), b->original_vars.end());
  std::sort(all.begin(), all.end());
  FACTA_CHECK(std::adjacent_find(all.begin(), all.end()) == all.end(),
              "merged bindings must cover disjoint original variables");
  return all;
}

}  // namespace

void lift_or(LiftedFormula& lf, VarTable& vars, const std::vector<VarId>& members) {
  check_members_known(lf, members);
  std::vector<const Binding*> bs;
  std::vector<std::pair<std::string, const RoNode*>> parts;
  for (VarId v : members) {
    const Binding& b = lf.bindings.at(v);
    FACTA_CHECK(b.kind == Binding::Kind::Formula,
                "lift-or applies only to formula-bound variables");
    bs.push_back(&b);
    parts.emplace_back(vars.name(v), &b.formula);
  }
  const std::vector<Clause> ref = cofactor_of(lf.formula, members.front());
  FACTA_CHECK(!ref.empty(), "lift-or members must occur in the formula");
  for (std::size_t i = 1; i < members.size(); ++i)
    FACTA_CHECK(cofactor_of(lf.formula, members[i]) == ref,
                "lift-or members must be cofactor-equivalent");

  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RoNode> kids;
  kids.reserve(parts.size());
  for (auto& [name, node] : parts) kids.push_back(*node);

  Binding merged = formula_binding(ro_or(std::move(kids)));
  merged.original_vars = disjoint_union(bs);

  VarId fresh = vars.intern(joined_name(members, vars));
  rewrite_clauses(lf, vars, members, fresh);
  lf.bindings[fresh] = std::move(merged);
}

void lift_and(LiftedFormula& lf, VarTable& vars, const std::vector<VarId>& members) {
  check_members_known(lf, members);
  std::vector<const Binding*> bs;
  const Binding* valueMember = nullptr;
  std::vector<std::pair<std::string, const RoNode*>> parts;
  for (VarId v : members) {
    const Binding& b = lf.bindings.at(v);
    bs.push_back(&b);
    if (b.kind == Binding::Kind::ValueTerm) {
      FACTA_CHECK(valueMember == nullptr,
                  "lift-and class may contain at most one ValueTerm");
      valueMember = &b;
      if (!b.trivial_guard()) parts.emplace_back(vars.name(v), &b.formula);
    } else {
      parts.emplace_back(vars.name(v), &b.formula);
    }
  }
  // Interchangeability: identical clause membership.
  std::vector<std::size_t> ref;
  for (std::size_t i = 0; i < lf.formula.clauses.size(); ++i)
    if (clause_contains(lf.formula.clauses[i], members.front())) ref.push_back(i);
  FACTA_CHECK(!ref.empty(), "lift-and members must occur in the formula");
  for (std::size_t m = 1; m < members.size(); ++m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < lf.formula.clauses.size(); ++i)
      if (clause_contains(lf.formula.clauses[i], members[m])) idx.push_back(i);
    FACTA_CHECK(idx == ref, "lift-and members must be interchangeable");
  }

  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RoNode> kids;
  kids.reserve(parts.size());
  for (auto& [name, node] : parts) kids.push_back(*node);

  Binding merged;
  if (valueMember) {
    RoNode guard;
    guard.kind = RoNode::Kind::And;  // may stay an empty And (trivially true)
    if (!kids.empty()) guard = ro_and(std::move(kids));
    merged = value_binding(std::move(guard), valueMember->value);
  } else {
    merged = formula_binding(ro_and(std::move(kids)));
  }
  merged.original_vars = disjoint_union(bs);

  VarId fresh = vars.intern(joined_name(members, vars));
  rewrite_clauses(lf, vars, members, fresh);
  lf.bindings[fresh] = std::move(merged);
}

namespace {

// Filters a cofactor class down to its applicable (formula-bound) members.
std::vector<VarId> applicable_or_members(const LiftedFormula& lf,
                                         const std::vector<VarId>& cls) {
  std::vector<VarId> out;
  for (VarId v : cls) {
    auto it = lf.bindings.find(v);
    if (it != lf.bindings.end() && it->second.kind == Binding::Kind::Formula)
      out.push_back(v);
  }
  return out;
}

bool class_still_cofactor_equivalent(const DnfFormula& f,
                                     const std::vector<VarId>& members) {
  std::vector<Clause> ref = cofactor_of(f, members.front());
  if (ref.empty()) return false;
  for (std::size_t i = 1; i < members.size(); ++i)
    if (cofactor_of(f, members[i]) != ref) return false;
  return true;
}

bool class_still_interchangeable(const DnfFormula& f,
                                 const std::vector<VarId>& members) {
  std::vector<std::vector<std::size_t>> idx(members.size());
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    for (std::size_t m = 0; m < members.size(); ++m)
      if (clause_contains(f.clauses[i], members[m])) idx[m].push_back(i);
  if (idx[0].empty()) return false;
  for (std::size_t m = 1; m < members.size(); ++m)
    if (idx[m] != idx[0]) return false;
  return true;
}

bool applicable_and_class(const LiftedFormula& lf, const std::vector<VarId>& cls) {
  std::size_t valueTerms = 0;
  for (VarId v : cls) {
    auto it = lf.bindings.find(v);
    if (it == lf.bindings.end()) return false;
    if (it->second.kind == Binding::Kind::ValueTerm) ++valueTerms;
  }
  return valueTerms <= 1;
}

}  // namespace

void saturate(LiftedFormula& lf, VarTable& vars, const Deadline& deadline) {
  bool changed = true;
  while (changed) {
    changed = false;
    // Phase 1: lift-or over the current cofactor partition. Earlier rewrites
    // in the same pass can invalidate later classes, so each precondition is
    // re-verified against the current formula; stale classes wait for the
    // next pass.
    for (const auto& cls : cofactor_partition(lf.formula, vars)) {
      deadline.check();
      std::vector<VarId> members = applicable_or_members(lf, cls);
      if (members.size() < 2) continue;
      if (!class_still_cofactor_equivalent(lf.formula, members)) continue;
      lift_or(lf, vars, members);
      changed = true;
    }
    // Phase 2: lift-and over the current interchangeable partition.
    for (const auto& cls : interchangeable_partition(lf.formula, vars)) {
      deadline.check();
      if (cls.size() < 2) continue;
      bool known = true;
      for (VarId v : cls)
        if (!lf.bindings.count(v)) known = false;
      if (!known) continue;
      if (!applicable_and_class(lf, cls)) continue;
      if (!class_still_interchangeable(lf.formula, cls)) continue;
      lift_and(lf, vars, cls);
      changed = true;
    }
  }
}

LiftedFormula lift(const DnfFormula& f, VarTable& vars, const Deadline& deadline) {
  LiftedFormula lf = identity_lifted(f, vars);
  saturate(lf, vars, deadline);
  return lf;
}

bool is_saturated(const LiftedFormula& lf, const VarTable& vars) {
  for (const auto& cls : cofactor_partition(lf.formula, vars)) {
    std::vector<VarId> members = applicable_or_members(lf, cls);
    if (members.size() >= 2 && class_still_cofactor_equivalent(lf.formula, members))
      return false;
  }
  for (const auto& cls : interchangeable_partition(lf.formula, vars)) {
    if (cls.size() >= 2 && applicable_and_class(lf, cls) &&
        class_still_interchangeable(lf.formula, cls))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Aggregate translation
// ---------------------------------------------------------------------------

LiftedFormula bnp_to_lifted(const BnpExpression& e, VarTable& vars) {
  FACTA_CHECK(monoid_idempotent(e.monoid),
              "semimodule translation applies to MIN/MAX only");
  LiftedFormula lf;
  std::map<Rational, VarId> valueVars;
  std::vector<Clause> clauses;
  for (const BnpTerm& t : e.terms) {
    if (t.formula.clauses.empty()) continue;  // unsatisfiable guard
    VarId w;
    auto it = valueVars.find(t.value);
    if (it != valueVars.end()) {
      w = it->second;
    } else {
      w = vars.intern("w|" + format_exact(t.value));
      valueVars.emplace(t.value, w);
      RoNode trivial;
      trivial.kind = RoNode::Kind::And;  // empty And = true
      lf.bindings[w] = value_binding(std::move(trivial), t.value);
    }
    for (const Clause& c : t.formula.clauses) {
      Clause k = c;
      k.push_back(w);
      normalize_clause(k);
      clauses.push_back(std::move(k));
    }
  }
  lf.formula.clauses = std::move(clauses);
  lf.formula = canonicalize(lf.formula, vars);
  lf.formula.universe = formula_vars(lf.formula);
  for (VarId v : lf.formula.universe)
    if (!lf.bindings.count(v)) lf.bindings.emplace(v, formula_binding(ro_var(v)));
  // Validity: exactly one ValueTerm variable per clause.
  for (const Clause& c : lf.formula.clauses) {
    std::size_t vts = 0;
    for (VarId v : c)
      if (lf.bindings.at(v).kind == Binding::Kind::ValueTerm) ++vts;
    FACTA_CHECK(vts == 1, "each aggregate clause carries exactly one ValueTerm");
  }
  return lf;
}

bool eval_lifted(const LiftedFormula& lf, const Valuation& trueVars) {
  for (const Clause& c : lf.formula.clauses) {
    bool sat = true;
    for (VarId v : c) {
      const Binding& b = lf.bindings.at(v);
      bool bv = b.kind == Binding::Kind::ValueTerm
                    ? (b.trivial_guard() || eval_ro(b.formula, trueVars))
                    : eval_ro(b.formula, trueVars);
      if (!bv) {
        sat = false;
        break;
      }
    }
    if (sat) return true;
  }
  return false;
}

void check_lifted_invariants(const LiftedFormula& lf, const VarTable& vars) {
  (void)vars;
  std::set<VarId> seenOriginals;
  for (VarId v : formula_vars(lf.formula)) {
    auto it = lf.bindings.find(v);
    FACTA_CHECK(it != lf.bindings.end(), "formula variable lacks a binding");
    const Binding& b = it->second;
    if (!(b.kind == Binding::Kind::ValueTerm && b.trivial_guard()))
      FACTA_CHECK(ro_read_once(b.formula), "binding must be read-once");
    for (VarId ov : b.original_vars)
      FACTA_CHECK(seenOriginals.insert(ov).second,
                  "bindings must be pairwise disjoint over original variables");
  }
}

}  // namespace facta
