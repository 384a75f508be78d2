// SPDX-License-Identifier: MIT

#include "compile.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

namespace facta {

NodeId expand_readonce(DTree& t, const RoNode& ro) {
  switch (ro.kind) {
    case RoNode::Kind::Var: return t.mk_var(ro.var);
    case RoNode::Kind::And: {
      FACTA_CHECK(!ro.children.empty(), "empty read-once And reached the tree");
      std::vector<NodeId> kids;
      kids.reserve(ro.children.size());
      for (const RoNode& k : ro.children) kids.push_back(expand_readonce(t, k));
      return t.mk_indand(std::move(kids));
    }
    case RoNode::Kind::Or: {
      std::vector<NodeId> kids;
      kids.reserve(ro.children.size());
      for (const RoNode& k : ro.children) kids.push_back(expand_readonce(t, k));
      return t.mk_indor(std::move(kids));
    }
  }
  throw InternalError("unreachable read-once kind");
}

namespace {

class Compiler {
 public:
  Compiler(DTree& tree, VarTable& vars, const CompileOptions& opts,
           const Deadline& deadline)
      : tree_(tree), vars_(vars), opts_(opts), deadline_(deadline) {}

  NodeId compile(const LiftedFormula& lf) {
    deadline_.check();
    const DnfFormula& f = lf.formula;
    if (f.clauses.empty()) return tree_.mk_const(false);
    if (f.clauses.front().empty()) return tree_.mk_const(true);

    std::string key = semantic_key(lf);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;

    std::vector<VarId> fvars = formula_vars(f);
    NodeId out;
    if (fvars.size() == 1) {
      FACTA_CHECK(f.clauses.size() == 1 && f.clauses.front().size() == 1,
                  "single-variable formula must be a single unit clause");
      out = expand_binding(lf.bindings.at(fvars.front()));
    } else {
      std::vector<std::vector<std::size_t>> comps = components(f);
      if (comps.size() > 1) {
        std::vector<NodeId> kids;
        kids.reserve(comps.size());
        for (const auto& idx : comps) kids.push_back(compile(sub_formula(lf, idx)));
        out = tree_.mk_indor(std::move(kids));
      } else {
        Clause common = common_vars(f);
        if (!common.empty()) {
          out = factor_common(lf, common);
        } else {
          out = shannon(lf, fvars);
        }
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  NodeId expand_binding(const Binding& b) {
    if (b.kind == Binding::Kind::Formula) return expand_readonce(tree_, b.formula);
    NodeId value = tree_.mk_value(b.value);
    if (b.trivial_guard()) return value;
    return tree_.mk_scalarmul({expand_readonce(tree_, b.formula)}, value);
  }

  // Semantic memo key: clauses rendered through bindings down to original
  // variables (sorted, so the key is canonical). Ids alone would be unsafe:
  // the same fresh name can be re-registered with a different binding in a
  // sibling Shannon branch.
  std::string semantic_key(const LiftedFormula& lf) {
    std::vector<std::string> clauseKeys;
    clauseKeys.reserve(lf.formula.clauses.size());
    for (const Clause& c : lf.formula.clauses) {
      std::vector<std::string> memberKeys;
      memberKeys.reserve(c.size());
      for (VarId v : c) memberKeys.push_back(binding_key(lf.bindings.at(v)));
      std::sort(memberKeys.begin(), memberKeys.end());
      std::string ck;
      for (const std::string& m : memberKeys) {
        ck += m;
        ck += '&';
      }
      clauseKeys.push_back(std::move(ck));
    }
    std::sort(clauseKeys.begin(), clauseKeys.end());
    std::string key;
    for (const std::string& ck : clauseKeys) {
      key += ck;
      key += ';';
    }
    return key;
  }

  std::string binding_key(const Binding& b) {
    if (b.kind == Binding::Kind::Formula) return ro_key(b.formula, vars_);
    std::string k = "(x ";
    k += b.trivial_guard() ? std::string("1") : ro_key(b.formula, vars_);
    k += ' ';
    k += format_fraction(b.value);
    k += ')';
    return k;
  }

  // Connected components of the clause co-occurrence graph, in order of first
  // clause appearance. Returned as clause-index groups.
  static std::vector<std::vector<std::size_t>> components(const DnfFormula& f) {
    const std::size_t n = f.clauses.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    std::unordered_map<VarId, std::size_t> firstClause;
    for (std::size_t i = 0; i < n; ++i) {
      for (VarId v : f.clauses[i]) {
        auto [it, inserted] = firstClause.emplace(v, i);
        if (!inserted) parent[find(i)] = find(it->second);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> ordered;
    for (auto& [root, idx] : groups)
      ordered.emplace_back(*std::min_element(idx.begin(), idx.end()), idx);
    std::sort(ordered.begin(), ordered.end());
    std::vector<std::vector<std::size_t>> out;
    out.reserve(ordered.size());
    for (auto& [first, idx] : ordered) out.push_back(std::move(idx));
    return out;
  }

  LiftedFormula sub_formula(const LiftedFormula& lf,
                            const std::vector<std::size_t>& clauseIdx) const {
    LiftedFormula sub;
    sub.formula.clauses.reserve(clauseIdx.size());
    for (std::size_t i : clauseIdx) sub.formula.clauses.push_back(lf.formula.clauses[i]);
    sub.formula.universe = formula_vars(sub.formula);
    for (VarId v : sub.formula.universe) sub.bindings.emplace(v, lf.bindings.at(v));
    return sub;
  }

  static Clause common_vars(const DnfFormula& f) {
    Clause common = f.clauses.front();
    for (std::size_t i = 1; i < f.clauses.size() && !common.empty(); ++i) {
      Clause next;
      std::set_intersection(common.begin(), common.end(), f.clauses[i].begin(),
                            f.clauses[i].end(), std::back_inserter(next));
      common = std::move(next);
    }
    return common;
  }

  NodeId factor_common(const LiftedFormula& lf, const Clause& common) {
    std::vector<NodeId> kids;
    for (VarId v : sorted_by_name(common, vars_))
      kids.push_back(expand_binding(lf.bindings.at(v)));
    // Residue: every clause minus the common variables.
    LiftedFormula res;
    for (const Clause& c : lf.formula.clauses) {
      Clause r;
      std::set_difference(c.begin(), c.end(), common.begin(), common.end(),
                          std::back_inserter(r));
      res.formula.clauses.push_back(std::move(r));
    }
    res.formula = canonicalize(res.formula, vars_);
    res.formula.universe = formula_vars(res.formula);
    for (VarId v : res.formula.universe) res.bindings.emplace(v, lf.bindings.at(v));
    if (!(res.formula.clauses.size() == 1 && res.formula.clauses.front().empty()))
      kids.push_back(compile(res));
    // Exactly one semimodule child (the clause's ValueTerm) turns the
    // conjunction into a scalar multiplication.
    std::vector<NodeId> booleans;
    NodeId module = kNoNode;
    for (NodeId k : kids) {
      if (tree_.node(k).semimodule) {
        FACTA_CHECK(module == kNoNode, "conjunction with two semimodule parts");
        module = k;
      } else {
        booleans.push_back(k);
      }
    }
    if (module == kNoNode) return tree_.mk_indand(std::move(kids));
    return tree_.mk_scalarmul(std::move(booleans), module);
  }

  NodeId shannon(const LiftedFormula& lf, const std::vector<VarId>& fvars) {
    // Most frequent variable; ties by smallest name; never a ValueTerm.
    bool havePick = false;
    VarId pick = 0;
    std::size_t bestCount = 0;
    std::map<VarId, std::size_t> freq;
    for (const Clause& c : lf.formula.clauses)
      for (VarId v : c) ++freq[v];
    for (VarId v : fvars) {
      if (lf.bindings.at(v).kind == Binding::Kind::ValueTerm) continue;
      std::size_t n = freq[v];
      if (!havePick || n > bestCount ||
          (n == bestCount && vars_.name(v) < vars_.name(pick))) {
        havePick = true;
        pick = v;
        bestCount = n;
      }
    }
    FACTA_CHECK(havePick, "Shannon expansion found no boolean variable");

    NodeId condition = expand_binding(lf.bindings.at(pick));
    NodeId hi = compile(residual(lf, pick, true));
    NodeId lo = compile(residual(lf, pick, false));
    return tree_.mk_shannon(condition, hi, lo);
  }

  LiftedFormula residual(const LiftedFormula& lf, VarId y, bool value) {
    LiftedFormula res;
    res.formula = canonicalize(restrict_dnf(lf.formula, y, value), vars_);
    res.formula.universe = formula_vars(res.formula);
    for (VarId v : res.formula.universe) res.bindings.emplace(v, lf.bindings.at(v));
    if (opts_.lift) saturate(res, vars_, deadline_);
    return res;
  }

  DTree& tree_;
  VarTable& vars_;
  const CompileOptions& opts_;
  const Deadline& deadline_;
  std::unordered_map<std::string, NodeId> memo_;
};

}  // namespace

DTree compile_dnf(const DnfFormula& f, VarTable& vars, const CompileOptions& opts,
                  const Deadline& deadline) {
  DTree tree;
  LiftedFormula lf = opts.lift ? lift(f, vars, deadline) : identity_lifted(f, vars);
  Compiler c(tree, vars, opts, deadline);
  tree.root = c.compile(lf);
  return tree;
}

DTree compile_bnp(const BnpExpression& e, VarTable& vars, const CompileOptions& opts,
                  const Deadline& deadline) {
  if (!monoid_idempotent(e.monoid))
    throw InputError(std::string(monoid_name(e.monoid)) +
                     " aggregates are attributed linearly per term; "
                     "no semimodule tree is compiled for them");
  DTree tree;
  tree.monoid = e.monoid;
  LiftedFormula lf = bnp_to_lifted(e, vars);
  if (opts.lift) saturate(lf, vars, deadline);
  Compiler c(tree, vars, opts, deadline);
  tree.root = c.compile(lf);
  return tree;
}

}  // namespace facta
