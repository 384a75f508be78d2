// SPDX-License-Identifier: MIT

#include "dtree.hpp"

#include <algorithm>

namespace facta {

namespace {

// Union of sorted id vectors; throws when they overlap (independence is a
// structural contract for (+), (.), (x) and Shannon conditions).
std::vector<VarId> disjoint_var_union(const std::vector<const std::vector<VarId>*>& sets,
                                      const char* what) {
  std::vector<VarId> all;
  std::size_t total = 0;
  for (const auto* s : sets) total += s->size();
  all.reserve(total);
  for (const auto* s : sets) all.insert(all.end(), s->begin(), s->end());
  std::sort(all.begin(), all.end());
  FACTA_CHECK(std::adjacent_find(all.begin(), all.end()) == all.end(), what);
  return all;
}

std::vector<VarId> var_union(const std::vector<const std::vector<VarId>*>& sets) {
  std::vector<VarId> all;
  for (const auto* s : sets) all.insert(all.end(), s->begin(), s->end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace

NodeId DTree::add(DNode n) {
  std::string key;
  key += static_cast<char>('0' + static_cast<int>(n.kind));
  if (n.kind == DKind::Var) {
    key += 'v';
    key += std::to_string(n.var);
  } else if (n.kind == DKind::Value) {
    key += 'm';
    key += format_fraction(n.value);
  }
  for (NodeId c : n.children) {
    key += ',';
    key += std::to_string(c);
  }
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(n));
  memo_.emplace(std::move(key), id);
  return id;
}

NodeId DTree::mk_const(bool one) {
  DNode n;
  n.kind = one ? DKind::Const1 : DKind::Const0;
  return add(std::move(n));
}

NodeId DTree::mk_var(VarId v) {
  DNode n;
  n.kind = DKind::Var;
  n.var = v;
  n.vars = {v};
  return add(std::move(n));
}

NodeId DTree::mk_value(const Rational& v) {
  DNode n;
  n.kind = DKind::Value;
  n.value = v;
  n.semimodule = true;
  return add(std::move(n));
}

NodeId DTree::mk_indor(std::vector<NodeId> children) {
  FACTA_CHECK(!children.empty(), "IndOr needs children");
  bool semi = false;
  for (NodeId c : children) semi |= nodes_[c].semimodule;
  std::vector<NodeId> kept;
  for (NodeId c : children) {
    const DNode& k = nodes_[c];
    if (k.kind == DKind::Const0) continue;  // neutral (false / Bottom)
    if (!semi && k.kind == DKind::Const1) return mk_const(true);  // absorbing
    FACTA_CHECK(k.semimodule == semi, "IndOr children must share one flavor");
    kept.push_back(c);
  }
  if (kept.empty()) return mk_const(false);
  if (kept.size() == 1) return kept[0];
  DNode n;
  n.kind = DKind::IndOr;
  n.semimodule = semi;
  std::vector<const std::vector<VarId>*> sets;
  for (NodeId c : kept) sets.push_back(&nodes_[c].vars);
  n.vars = disjoint_var_union(sets, "IndOr children must be variable-disjoint");
  n.children = std::move(kept);
  return add(std::move(n));
}

NodeId DTree::mk_indand(std::vector<NodeId> children) {
  FACTA_CHECK(!children.empty(), "IndAnd needs children");
  std::vector<NodeId> kept;
  for (NodeId c : children) {
    const DNode& k = nodes_[c];
    FACTA_CHECK(!k.semimodule, "IndAnd children must be boolean (use ScalarMul)");
    if (k.kind == DKind::Const1) continue;              // neutral
    if (k.kind == DKind::Const0) return mk_const(false);  // absorbing
    kept.push_back(c);
  }
  if (kept.empty()) return mk_const(true);
  if (kept.size() == 1) return kept[0];
  DNode n;
  n.kind = DKind::IndAnd;
  std::vector<const std::vector<VarId>*> sets;
  for (NodeId c : kept) sets.push_back(&nodes_[c].vars);
  n.vars = disjoint_var_union(sets, "IndAnd children must be variable-disjoint");
  n.children = std::move(kept);
  return add(std::move(n));
}

NodeId DTree::mk_shannon(NodeId condition, NodeId high, NodeId low) {
  const DNode& cond = nodes_[condition];
  FACTA_CHECK(!cond.semimodule, "Shannon condition must be boolean");
  if (cond.kind == DKind::Const1) return high;
  if (cond.kind == DKind::Const0) return low;
  if (high == low) return high;  // memoized => structural equality is id equality
  bool semi = nodes_[high].semimodule || nodes_[low].semimodule;
  if (semi) {
    FACTA_CHECK(nodes_[high].semimodule || nodes_[high].kind == DKind::Const0,
                "Shannon branch flavor mismatch");
    FACTA_CHECK(nodes_[low].semimodule || nodes_[low].kind == DKind::Const0,
                "Shannon branch flavor mismatch");
  }
  DNode n;
  n.kind = DKind::Shannon;
  n.semimodule = semi;
  // Branches may share variables with each other, but not with the condition.
  std::vector<VarId> branches =
      var_union({&nodes_[high].vars, &nodes_[low].vars});
  n.vars = disjoint_var_union({&cond.vars, &branches},
                              "Shannon condition must be variable-disjoint from branches");
  n.children = {condition, high, low};
  return add(std::move(n));
}

NodeId DTree::mk_scalarmul(std::vector<NodeId> booleans, NodeId module) {
  const DNode& m = nodes_[module];
  if (m.kind == DKind::Const0) return mk_const(false);  // Bottom annihilates
  FACTA_CHECK(m.semimodule, "ScalarMul module child must be semimodule");
  // Flatten a nested ScalarMul module.
  if (m.kind == DKind::ScalarMul) {
    std::vector<NodeId> kids(m.children.begin(), m.children.end() - 1);
    NodeId inner = m.children.back();
    booleans.insert(booleans.end(), kids.begin(), kids.end());
    return mk_scalarmul(std::move(booleans), inner);
  }
  std::vector<NodeId> kept;
  for (NodeId b : booleans) {
    const DNode& k = nodes_[b];
    FACTA_CHECK(!k.semimodule, "ScalarMul scalar children must be boolean");
    if (k.kind == DKind::Const1) continue;
    if (k.kind == DKind::Const0) return mk_const(false);
    kept.push_back(b);
  }
  if (kept.empty()) return module;
  DNode n;
  n.kind = DKind::ScalarMul;
  n.semimodule = true;
  std::vector<const std::vector<VarId>*> sets;
  for (NodeId c : kept) sets.push_back(&nodes_[c].vars);
  sets.push_back(&m.vars);
  n.vars = disjoint_var_union(sets, "ScalarMul children must be variable-disjoint");
  n.children = std::move(kept);
  n.children.push_back(module);
  return add(std::move(n));
}

std::vector<NodeId> DTree::reachable() const {
  std::vector<bool> seen(nodes_.size(), false);
  if (root == kNoNode) return {};
  std::vector<NodeId> stack = {root};
  seen[root] = true;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (NodeId c : nodes_[id].children) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

TreeStats tree_stats(const DTree& t) {
  TreeStats s;
  if (t.root == kNoNode) return s;
  std::vector<NodeId> order = t.reachable();
  // multiplicity[id] = number of occurrences in tree semantics
  std::vector<BigInt> mult(t.dag_size(), 0);
  mult[t.root] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (NodeId c : t.node(*it).children) mult[c] += mult[*it];
  std::vector<std::size_t> depth(t.dag_size());
  for (NodeId id : order) {  // ascending => children first
    const DNode& n = t.node(id);
    std::size_t d = 0;
    for (NodeId c : n.children) d = std::max(d, depth[c] + 1);
    depth[id] = d;
    s.size += mult[id];
    s.gate_histogram[n.kind] += mult[id];
    if (n.kind == DKind::Shannon) s.shannon_count += mult[id];
  }
  s.depth = depth[t.root];
  s.dag_size = order.size();
  s.var_count = t.node(t.root).vars.size();
  return s;
}

const char* dkind_name(DKind k) {
  switch (k) {
    case DKind::Const0: return "const0";
    case DKind::Const1: return "const1";
    case DKind::Var: return "var";
    case DKind::Value: return "value";
    case DKind::IndOr: return "indor";
    case DKind::IndAnd: return "indand";
    case DKind::Shannon: return "shannon";
    case DKind::ScalarMul: return "scalarmul";
  }
  return "?";
}

namespace {

bool eval_bool_node(const DTree& t, NodeId id, const Valuation& trueVars);

OutcomeValue eval_semi_node(const DTree& t, NodeId id, const Valuation& trueVars) {
  const DNode& n = t.node(id);
  switch (n.kind) {
    case DKind::Const0: return OutcomeValue::bot();
    case DKind::Value: return OutcomeValue::of(n.value);
    case DKind::IndOr: {
      OutcomeValue acc = OutcomeValue::bot();
      for (NodeId c : n.children) {
        OutcomeValue v = eval_semi_node(t, c, trueVars);
        if (v.bottom) continue;
        if (acc.bottom) {
          acc = v;
        } else if (t.monoid == MonoidKind::Min) {
          acc.value = std::min(acc.value, v.value);
        } else {
          acc.value = std::max(acc.value, v.value);
        }
      }
      return acc;
    }
    case DKind::Shannon: {
      bool c = eval_bool_node(t, n.children[0], trueVars);
      return eval_semi_node(t, n.children[c ? 1 : 2], trueVars);
    }
    case DKind::ScalarMul: {
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
        if (!eval_bool_node(t, n.children[i], trueVars)) return OutcomeValue::bot();
      return eval_semi_node(t, n.children.back(), trueVars);
    }
    default:
      throw InternalError("boolean node evaluated in semimodule context");
  }
}

bool eval_bool_node(const DTree& t, NodeId id, const Valuation& trueVars) {
  const DNode& n = t.node(id);
  switch (n.kind) {
    case DKind::Const0: return false;
    case DKind::Const1: return true;
    case DKind::Var:
      return std::binary_search(trueVars.begin(), trueVars.end(), n.var);
    case DKind::IndOr:
      for (NodeId c : n.children)
        if (eval_bool_node(t, c, trueVars)) return true;
      return false;
    case DKind::IndAnd:
      for (NodeId c : n.children)
        if (!eval_bool_node(t, c, trueVars)) return false;
      return true;
    case DKind::Shannon: {
      bool c = eval_bool_node(t, n.children[0], trueVars);
      return eval_bool_node(t, n.children[c ? 1 : 2], trueVars);
    }
    default:
      throw InternalError("semimodule node evaluated in boolean context");
  }
}

}  // namespace

OutcomeValue eval_dtree(const DTree& t, const Valuation& trueVars) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  const DNode& r = t.node(t.root);
  if (r.semimodule) return eval_semi_node(t, t.root, trueVars);
  return OutcomeValue::of(eval_bool_node(t, t.root, trueVars) ? 1 : 0);
}

void check_dtree_invariants(const DTree& t) {
  for (NodeId id : t.reachable()) {
    const DNode& n = t.node(id);
    std::vector<VarId> expect;
    switch (n.kind) {
      case DKind::Const0:
      case DKind::Const1:
        FACTA_CHECK(n.children.empty() && n.vars.empty(), "const node shape");
        break;
      case DKind::Var:
        FACTA_CHECK(n.children.empty() && n.vars == std::vector<VarId>{n.var},
                    "var node shape");
        break;
      case DKind::Value:
        FACTA_CHECK(n.children.empty() && n.vars.empty() && n.semimodule,
                    "value node shape");
        break;
      case DKind::IndOr: {
        FACTA_CHECK(n.children.size() >= 2, "IndOr arity");
        std::vector<const std::vector<VarId>*> sets;
        for (NodeId c : n.children) {
          FACTA_CHECK(t.node(c).semimodule == n.semimodule, "IndOr flavor");
          sets.push_back(&t.node(c).vars);
        }
        expect = disjoint_var_union(sets, "IndOr disjointness");
        FACTA_CHECK(n.vars == expect, "IndOr var cache");
        break;
      }
      case DKind::IndAnd: {
        FACTA_CHECK(n.children.size() >= 2 && !n.semimodule, "IndAnd shape");
        std::vector<const std::vector<VarId>*> sets;
        for (NodeId c : n.children) {
          FACTA_CHECK(!t.node(c).semimodule, "IndAnd flavor");
          sets.push_back(&t.node(c).vars);
        }
        expect = disjoint_var_union(sets, "IndAnd disjointness");
        FACTA_CHECK(n.vars == expect, "IndAnd var cache");
        break;
      }
      case DKind::Shannon: {
        FACTA_CHECK(n.children.size() == 3, "Shannon arity");
        const DNode& cond = t.node(n.children[0]);
        FACTA_CHECK(!cond.semimodule, "Shannon condition flavor");
        std::vector<VarId> branches = var_union(
            {&t.node(n.children[1]).vars, &t.node(n.children[2]).vars});
        expect = disjoint_var_union({&cond.vars, &branches},
                                    "Shannon condition/branch disjointness");
        FACTA_CHECK(n.vars == expect, "Shannon var cache");
        break;
      }
      case DKind::ScalarMul: {
        FACTA_CHECK(n.children.size() >= 2 && n.semimodule, "ScalarMul shape");
        std::vector<const std::vector<VarId>*> sets;
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
          FACTA_CHECK(!t.node(n.children[i]).semimodule, "ScalarMul scalar flavor");
          sets.push_back(&t.node(n.children[i]).vars);
        }
        const DNode& m = t.node(n.children.back());
        FACTA_CHECK(m.semimodule && m.kind != DKind::ScalarMul,
                    "ScalarMul module flavor (flattened)");
        sets.push_back(&m.vars);
        expect = disjoint_var_union(sets, "ScalarMul disjointness");
        FACTA_CHECK(n.vars == expect, "ScalarMul var cache");
        break;
      }
    }
  }
}

}  // namespace facta
