// SPDX-License-Identifier: MIT

#include "attribution.hpp"

#include <algorithm>

namespace facta {

KVec conv(const KVec& a, const KVec& b) {
  if (a.empty() || b.empty()) return {};
  KVec out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

std::vector<Rational> corr(const std::vector<Rational>& s, const KVec& b,
                           std::size_t outLen) {
  std::vector<Rational> out(outLen, Rational(0));
  for (std::size_t j = 0; j < outLen; ++j) {
    for (std::size_t k = j; k < s.size() && k - j < b.size(); ++k) {
      if (s[k] == 0 || b[k - j] == 0) continue;
      out[j] += s[k] * Rational(b[k - j]);
    }
  }
  return out;
}

namespace {

inline std::size_t nv(const DNode& n) { return n.vars.size(); }

// Product over all children except index i, via prefix/suffix arrays.
template <typename T>
std::vector<T> excluding_products(const std::vector<T>& xs, const T& one) {
  const std::size_t n = xs.size();
  std::vector<T> prefix(n + 1, one), suffix(n + 1, one);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * xs[i];
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * xs[i];
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = prefix[i] * suffix[i + 1];
  return out;
}

// Convolution product over all children except index i.
std::vector<KVec> excluding_convs(const std::vector<KVec>& xs) {
  const std::size_t n = xs.size();
  std::vector<KVec> prefix(n + 1, KVec{1}), suffix(n + 1, KVec{1});
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = conv(prefix[i], xs[i]);
  for (std::size_t i = n; i-- > 0;) suffix[i] = conv(suffix[i + 1], xs[i]);
  std::vector<KVec> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = conv(prefix[i], suffix[i + 1]);
  return out;
}

KVec nonmodels(const KVec& m, std::size_t vars) {
  std::vector<BigInt> row = binomial_row(vars);
  KVec out(vars + 1);
  for (std::size_t j = 0; j <= vars; ++j)
    out[j] = row[j] - (j < m.size() ? m[j] : BigInt(0));
  return out;
}

}  // namespace

std::vector<BigInt> boolean_counts(const DTree& t, const Deadline& deadline) {
  std::vector<BigInt> c(t.dag_size(), 0);
  for (NodeId id : t.reachable()) {
    deadline.check();
    const DNode& n = t.node(id);
    if (n.semimodule) continue;
    switch (n.kind) {
      case DKind::Const0: c[id] = 0; break;
      case DKind::Const1: c[id] = 1; break;
      case DKind::Var: c[id] = 1; break;
      case DKind::IndAnd: {
        BigInt p = 1;
        for (NodeId k : n.children) p *= c[k];
        c[id] = p;
        break;
      }
      case DKind::IndOr: {
        BigInt nm = 1;
        for (NodeId k : n.children) nm *= pow2(nv(t.node(k))) - c[k];
        c[id] = pow2(nv(n)) - nm;
        break;
      }
      case DKind::Shannon: {
        const DNode& f = t.node(n.children[0]);
        const DNode& hi = t.node(n.children[1]);
        const DNode& lo = t.node(n.children[2]);
        std::size_t w = nv(n) - nv(f);
        c[id] = c[n.children[0]] * c[n.children[1]] * pow2(w - nv(hi)) +
                (pow2(nv(f)) - c[n.children[0]]) * c[n.children[2]] * pow2(w - nv(lo));
        break;
      }
      default:
        throw InternalError("semimodule node in boolean counting");
    }
  }
  return c;
}

std::vector<KVec> boolean_kcounts(const DTree& t, const Deadline& deadline) {
  std::vector<KVec> m(t.dag_size());
  for (NodeId id : t.reachable()) {
    deadline.check();
    const DNode& n = t.node(id);
    if (n.semimodule) continue;
    switch (n.kind) {
      case DKind::Const0: m[id] = {0}; break;
      case DKind::Const1: m[id] = {1}; break;
      case DKind::Var: m[id] = {0, 1}; break;
      case DKind::IndAnd: {
        KVec acc{1};
        for (NodeId k : n.children) acc = conv(acc, m[k]);
        m[id] = std::move(acc);
        break;
      }
      case DKind::IndOr: {
        KVec nm{1};
        for (NodeId k : n.children) nm = conv(nm, nonmodels(m[k], nv(t.node(k))));
        m[id] = nonmodels(nm, nv(n));  // binom(nv) - nm
        break;
      }
      case DKind::Shannon: {
        const DNode& hi = t.node(n.children[1]);
        const DNode& lo = t.node(n.children[2]);
        std::size_t nf = nv(t.node(n.children[0]));
        std::size_t w = nv(n) - nf;
        KVec padH = conv(m[n.children[1]], binomial_row(w - nv(hi)));
        KVec padL = conv(m[n.children[2]], binomial_row(w - nv(lo)));
        KVec a = conv(m[n.children[0]], padH);
        KVec b = conv(nonmodels(m[n.children[0]], nf), padL);
        KVec out(nv(n) + 1, 0);
        for (std::size_t k = 0; k < out.size(); ++k) {
          if (k < a.size()) out[k] += a[k];
          if (k < b.size()) out[k] += b[k];
        }
        m[id] = std::move(out);
        break;
      }
      default:
        throw InternalError("semimodule node in boolean k-counting");
    }
  }
  return m;
}

BanzhafRun gradient_banzhaf(const DTree& t, const std::vector<VarId>& universe,
                            const Deadline& deadline) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  FACTA_CHECK(!t.node(t.root).semimodule,
              "gradient_banzhaf applies to boolean trees");
  for (VarId v : t.node(t.root).vars)
    if (!std::binary_search(universe.begin(), universe.end(), v))
      throw InputError("universe does not cover the tree's variables");

  BanzhafRun run;
  for (VarId v : universe) run.attribution[v] = 0;

  std::vector<NodeId> order = t.reachable();
  std::vector<BigInt> counts = boolean_counts(t, deadline);
  run.node_p.assign(t.dag_size(), Rational(0));
  run.node_g.assign(t.dag_size(), Rational(0));
  for (NodeId id : order)
    run.node_p[id] = Rational(counts[id], pow2(nv(t.node(id))));
  run.root_probability = run.node_p[t.root];
  if (universe.empty()) return run;

  run.node_g[t.root] = Rational(pow2(universe.size() - 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    deadline.check();
    NodeId id = *it;
    const DNode& n = t.node(id);
    const Rational& g = run.node_g[id];
    if (g == 0 && n.kind != DKind::Var) continue;
    switch (n.kind) {
      case DKind::Var:
        run.attribution[n.var] += g;
        break;
      case DKind::IndAnd: {
        std::vector<Rational> ps;
        ps.reserve(n.children.size());
        for (NodeId k : n.children) ps.push_back(run.node_p[k]);
        std::vector<Rational> ex = excluding_products(ps, Rational(1));
        for (std::size_t i = 0; i < n.children.size(); ++i)
          run.node_g[n.children[i]] += g * ex[i];
        break;
      }
      case DKind::IndOr: {
        std::vector<Rational> qs;
        qs.reserve(n.children.size());
        for (NodeId k : n.children) qs.push_back(Rational(1) - run.node_p[k]);
        std::vector<Rational> ex = excluding_products(qs, Rational(1));
        for (std::size_t i = 0; i < n.children.size(); ++i)
          run.node_g[n.children[i]] += g * ex[i];
        break;
      }
      case DKind::Shannon: {
        const Rational& pf = run.node_p[n.children[0]];
        run.node_g[n.children[0]] +=
            g * (run.node_p[n.children[1]] - run.node_p[n.children[2]]);
        run.node_g[n.children[1]] += g * pf;
        run.node_g[n.children[2]] += g * (Rational(1) - pf);
        break;
      }
      default:
        break;  // constants absorb gradient
    }
  }
  for (auto& [v, val] : run.attribution)
    FACTA_CHECK(boost::multiprecision::denominator(val) == 1,
                "Banzhaf values must be integers");
  return run;
}

std::map<VarId, Rational> gradient_shapley(const DTree& t,
                                           const std::vector<VarId>& universe,
                                           const Deadline& deadline) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  FACTA_CHECK(!t.node(t.root).semimodule,
              "gradient_shapley applies to boolean trees");
  for (VarId v : t.node(t.root).vars)
    if (!std::binary_search(universe.begin(), universe.end(), v))
      throw InputError("universe does not cover the tree's variables");

  std::map<VarId, Rational> out;
  for (VarId v : universe) out[v] = 0;
  const std::size_t n = universe.size();
  if (n == 0) return out;

  std::vector<NodeId> order = t.reachable();
  std::vector<KVec> m = boolean_kcounts(t, deadline);

  // Seed: s_root[k] = W[k-1], where W[j] folds the Shapley coefficients with
  // the padding from vars(root) to the universe:
  //   W[j] = sum_k C[k] * binom(|U| - |vars(root)|, k - j).
  const std::size_t rootVars = nv(t.node(t.root));
  const std::size_t pad = n - rootVars;
  std::vector<Rational> coeff = shapley_coefficients(n);
  std::vector<Rational> W(rootVars + 1, Rational(0));
  for (std::size_t j = 0; j <= rootVars; ++j)
    for (std::size_t k = j; k < n && k - j <= pad; ++k)
      W[j] += coeff[k] * Rational(binomial(pad, k - j));

  std::vector<std::vector<Rational>> s(t.dag_size());
  for (NodeId id : order) s[id].assign(nv(t.node(id)) + 1, Rational(0));
  for (std::size_t k = 1; k <= rootVars; ++k) s[t.root][k] = W[k - 1];

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    deadline.check();
    NodeId id = *it;
    const DNode& node = t.node(id);
    const std::vector<Rational>& sv = s[id];
    switch (node.kind) {
      case DKind::Var:
        out[node.var] += sv[1];
        break;
      case DKind::IndAnd: {
        std::vector<KVec> kid;
        kid.reserve(node.children.size());
        for (NodeId k : node.children) kid.push_back(m[k]);
        std::vector<KVec> ex = excluding_convs(kid);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          std::vector<Rational> add =
              corr(sv, ex[i], nv(t.node(node.children[i])) + 1);
          for (std::size_t j = 0; j < add.size(); ++j)
            s[node.children[i]][j] += add[j];
        }
        break;
      }
      case DKind::IndOr: {
        std::vector<KVec> kid;
        kid.reserve(node.children.size());
        for (NodeId k : node.children)
          kid.push_back(nonmodels(m[k], nv(t.node(k))));
        std::vector<KVec> ex = excluding_convs(kid);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          std::vector<Rational> add =
              corr(sv, ex[i], nv(t.node(node.children[i])) + 1);
          for (std::size_t j = 0; j < add.size(); ++j)
            s[node.children[i]][j] += add[j];
        }
        break;
      }
      case DKind::Shannon: {
        NodeId fid = node.children[0], hid = node.children[1], lid = node.children[2];
        std::size_t nf = nv(t.node(fid));
        std::size_t w = nv(node) - nf;
        KVec bH = binomial_row(w - nv(t.node(hid)));
        KVec bL = binomial_row(w - nv(t.node(lid)));
        KVec nmf = nonmodels(m[fid], nf);
        // condition
        {
          std::vector<Rational> a = corr(sv, conv(m[hid], bH), nf + 1);
          std::vector<Rational> b = corr(sv, conv(m[lid], bL), nf + 1);
          for (std::size_t j = 0; j <= nf; ++j) s[fid][j] += a[j] - b[j];
        }
        // branches
        {
          std::vector<Rational> a =
              corr(sv, conv(m[fid], bH), nv(t.node(hid)) + 1);
          for (std::size_t j = 0; j < a.size(); ++j) s[hid][j] += a[j];
          std::vector<Rational> b = corr(sv, conv(nmf, bL), nv(t.node(lid)) + 1);
          for (std::size_t j = 0; j < b.size(); ++j) s[lid][j] += b[j];
        }
        break;
      }
      default:
        break;  // constants
    }
  }
  return out;
}

Rational root_probability_with(const DTree& t,
                               std::optional<std::pair<VarId, bool>> fixed,
                               const Deadline& deadline) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  std::vector<Rational> p(t.dag_size(), Rational(0));
  for (NodeId id : t.reachable()) {
    deadline.check();
    const DNode& n = t.node(id);
    switch (n.kind) {
      case DKind::Const0: p[id] = 0; break;
      case DKind::Const1: p[id] = 1; break;
      case DKind::Var:
        if (fixed && fixed->first == n.var)
          p[id] = fixed->second ? 1 : 0;
        else
          p[id] = Rational(1, 2);
        break;
      case DKind::IndAnd: {
        Rational acc = 1;
        for (NodeId k : n.children) acc *= p[k];
        p[id] = acc;
        break;
      }
      case DKind::IndOr: {
        Rational acc = 1;
        for (NodeId k : n.children) acc *= Rational(1) - p[k];
        p[id] = Rational(1) - acc;
        break;
      }
      case DKind::Shannon:
        p[id] = p[n.children[0]] * p[n.children[1]] +
                (Rational(1) - p[n.children[0]]) * p[n.children[2]];
        break;
      default:
        throw InternalError("root_probability_with applies to boolean trees");
    }
  }
  return p[t.root];
}

std::map<VarId, Rational> linear_aggregate_attribution(
    const BnpExpression& e, Measure measure, VarTable& vars,
    const CompileOptions& copts, const Deadline& deadline) {
  if (monoid_idempotent(e.monoid))
    throw InputError("linear attribution applies to SUM/COUNT aggregates");
  std::map<VarId, Rational> out;
  for (VarId v : e.universe) out[v] = 0;
  for (const BnpTerm& term : e.terms) {
    if (term.formula.clauses.empty()) continue;  // never satisfied
    DTree tree = compile_dnf(term.formula, vars, copts, deadline);
    if (measure == Measure::Banzhaf) {
      BanzhafRun run = gradient_banzhaf(tree, e.universe, deadline);
      for (auto& [v, a] : run.attribution) out[v] += a * term.value;
    } else {
      std::map<VarId, Rational> run = gradient_shapley(tree, e.universe, deadline);
      for (auto& [v, a] : run) out[v] += a * term.value;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MIN / MAX
// ---------------------------------------------------------------------------

namespace {

// Effective-value transform: MIN runs the MAX recurrences on negated values
// and the results are negated back at the boundary.
inline Rational eff_value(MonoidKind m, const Rational& v) {
  return m == MonoidKind::Min ? Rational(-v) : v;
}

inline OutcomeValue vmax(const OutcomeValue& a, const OutcomeValue& b) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  return a.value >= b.value ? a : b;
}

// Scalar bottom-up state: distributions in effective-value space, plus the
// left-fold partials of every IndOr (needed by reverse mode).
struct SemiUp {
  std::vector<std::optional<OutcomeDist>> dist;
  std::vector<std::vector<OutcomeDist>> orPartials;  // per IndOr node
  std::vector<BigInt> boolCount;
};

OutcomeDist dist_of_child(const DTree& t, const SemiUp& up, NodeId c) {
  const DNode& n = t.node(c);
  if (n.semimodule) return *up.dist[c];
  FACTA_CHECK(n.kind == DKind::Const0, "boolean child where Bottom expected");
  return OutcomeDist{{OutcomeValue::bot(), 1}};
}

OutcomeDist combine_max(const OutcomeDist& a, const OutcomeDist& b) {
  OutcomeDist out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) out[vmax(ka, kb)] += ca * cb;
  return out;
}

SemiUp semi_bottom_up(const DTree& t, const Deadline& deadline) {
  SemiUp up;
  up.dist.resize(t.dag_size());
  up.orPartials.resize(t.dag_size());
  up.boolCount = boolean_counts(t, deadline);
  for (NodeId id : t.reachable()) {
    deadline.check();
    const DNode& n = t.node(id);
    if (!n.semimodule) continue;
    switch (n.kind) {
      case DKind::Value:
        up.dist[id] = OutcomeDist{{OutcomeValue::of(eff_value(t.monoid, n.value)), 1}};
        break;
      case DKind::IndOr: {
        std::vector<OutcomeDist>& partials = up.orPartials[id];
        OutcomeDist acc = dist_of_child(t, up, n.children[0]);
        partials.push_back(acc);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          acc = combine_max(acc, dist_of_child(t, up, n.children[i]));
          partials.push_back(acc);
        }
        up.dist[id] = std::move(acc);
        break;
      }
      case DKind::ScalarMul: {
        BigInt cb = 1;
        std::size_t nb = 0;
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
          cb *= up.boolCount[n.children[i]];
          nb += nv(t.node(n.children[i]));
        }
        NodeId mid = n.children.back();
        const OutcomeDist& M = *up.dist[mid];
        std::size_t nM = nv(t.node(mid));
        OutcomeDist out;
        for (const auto& [k, c] : M)
          if (!k.bottom) out[k] = cb * c;
        BigInt mbot = 0;
        auto itb = M.find(OutcomeValue::bot());
        if (itb != M.end()) mbot = itb->second;
        out[OutcomeValue::bot()] = cb * mbot + (pow2(nb) - cb) * pow2(nM);
        up.dist[id] = std::move(out);
        break;
      }
      case DKind::Shannon: {
        NodeId fid = n.children[0], hid = n.children[1], lid = n.children[2];
        std::size_t nf = nv(t.node(fid));
        std::size_t w = nv(n) - nf;
        BigInt padH = pow2(w - nv(t.node(hid)));
        BigInt padL = pow2(w - nv(t.node(lid)));
        OutcomeDist H = dist_of_child(t, up, hid);
        OutcomeDist L = dist_of_child(t, up, lid);
        const BigInt& cf = up.boolCount[fid];
        BigInt ncf = pow2(nf) - cf;
        OutcomeDist out;
        for (const auto& [k, c] : H) out[k] += cf * padH * c;
        for (const auto& [k, c] : L) out[k] += ncf * padL * c;
        up.dist[id] = std::move(out);
        break;
      }
      default:
        throw InternalError("unexpected semimodule node kind");
    }
    // Mass check: total = 2^|vars|.
    BigInt total = 0;
    for (const auto& [k, c] : *up.dist[id]) total += c;
    FACTA_CHECK(total == pow2(nv(n)), "outcome distribution mass");
  }
  return up;
}

// k-resolved bottom-up state.
struct SemiUpK {
  std::vector<std::optional<KOutcomeDist>> dist;
  std::vector<std::vector<KOutcomeDist>> orPartials;
  std::vector<KVec> boolK;
};

KOutcomeDist kdist_of_child(const DTree& t, const SemiUpK& up, NodeId c) {
  const DNode& n = t.node(c);
  if (n.semimodule) return *up.dist[c];
  FACTA_CHECK(n.kind == DKind::Const0, "boolean child where Bottom expected");
  return KOutcomeDist{{OutcomeValue::bot(), KVec{1}}};
}

KOutcomeDist combine_max_k(const KOutcomeDist& a, const KOutcomeDist& b) {
  KOutcomeDist out;
  for (const auto& [ka, va] : a) {
    for (const auto& [kb, vb] : b) {
      KVec c = conv(va, vb);
      KVec& slot = out[vmax(ka, kb)];
      if (slot.size() < c.size()) slot.resize(c.size(), 0);
      for (std::size_t i = 0; i < c.size(); ++i) slot[i] += c[i];
    }
  }
  return out;
}

void add_into(KVec& slot, const KVec& c) {
  if (slot.size() < c.size()) slot.resize(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) slot[i] += c[i];
}

SemiUpK semi_bottom_up_k(const DTree& t, const Deadline& deadline) {
  SemiUpK up;
  up.dist.resize(t.dag_size());
  up.orPartials.resize(t.dag_size());
  up.boolK = boolean_kcounts(t, deadline);
  for (NodeId id : t.reachable()) {
    deadline.check();
    const DNode& n = t.node(id);
    if (!n.semimodule) continue;
    switch (n.kind) {
      case DKind::Value:
        up.dist[id] =
            KOutcomeDist{{OutcomeValue::of(eff_value(t.monoid, n.value)), KVec{1}}};
        break;
      case DKind::IndOr: {
        std::vector<KOutcomeDist>& partials = up.orPartials[id];
        KOutcomeDist acc = kdist_of_child(t, up, n.children[0]);
        partials.push_back(acc);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          acc = combine_max_k(acc, kdist_of_child(t, up, n.children[i]));
          partials.push_back(acc);
        }
        up.dist[id] = std::move(acc);
        break;
      }
      case DKind::ScalarMul: {
        KVec mb{1};
        std::size_t nb = 0;
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
          mb = conv(mb, up.boolK[n.children[i]]);
          nb += nv(t.node(n.children[i]));
        }
        NodeId mid = n.children.back();
        const KOutcomeDist& M = *up.dist[mid];
        std::size_t nM = nv(t.node(mid));
        KOutcomeDist out;
        KVec mbot;
        for (const auto& [k, vec] : M) {
          if (k.bottom)
            mbot = vec;
          else
            out[k] = conv(mb, vec);
        }
        KVec bot = conv(nonmodels(mb, nb), binomial_row(nM));
        if (!mbot.empty()) add_into(bot, conv(mb, mbot));
        out[OutcomeValue::bot()] = std::move(bot);
        up.dist[id] = std::move(out);
        break;
      }
      case DKind::Shannon: {
        NodeId fid = n.children[0], hid = n.children[1], lid = n.children[2];
        std::size_t nf = nv(t.node(fid));
        std::size_t w = nv(n) - nf;
        KVec bH = binomial_row(w - nv(t.node(hid)));
        KVec bL = binomial_row(w - nv(t.node(lid)));
        KVec mfH = conv(up.boolK[fid], bH);
        KVec nmfL = conv(nonmodels(up.boolK[fid], nf), bL);
        KOutcomeDist H = kdist_of_child(t, up, hid);
        KOutcomeDist L = kdist_of_child(t, up, lid);
        KOutcomeDist out;
        for (const auto& [k, vec] : H) add_into(out[k], conv(mfH, vec));
        for (const auto& [k, vec] : L) add_into(out[k], conv(nmfL, vec));
        up.dist[id] = std::move(out);
        break;
      }
      default:
        throw InternalError("unexpected semimodule node kind");
    }
  }
  return up;
}

// Maps an effective-space distribution back to actual values.
OutcomeDist remap_actual(MonoidKind m, const OutcomeDist& d) {
  if (m != MonoidKind::Min) return d;
  OutcomeDist out;
  for (const auto& [k, c] : d)
    out[k.bottom ? k : OutcomeValue::of(-k.value)] = c;
  return out;
}

KOutcomeDist remap_actual_k(MonoidKind m, const KOutcomeDist& d) {
  if (m != MonoidKind::Min) return d;
  KOutcomeDist out;
  for (const auto& [k, vec] : d)
    out[k.bottom ? k : OutcomeValue::of(-k.value)] = vec;
  return out;
}

}  // namespace

ValueCountsResult value_counts(const DTree& t, const Deadline& deadline) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  ValueCountsResult res;
  res.per_node.resize(t.dag_size());
  if (!t.node(t.root).semimodule) {
    FACTA_CHECK(t.node(t.root).kind == DKind::Const0,
                "value_counts applies to semimodule trees");
    res.root = OutcomeDist{{OutcomeValue::bot(), 1}};
    return res;
  }
  SemiUp up = semi_bottom_up(t, deadline);
  for (NodeId id : t.reachable())
    if (up.dist[id]) res.per_node[id] = remap_actual(t.monoid, *up.dist[id]);
  res.root = *res.per_node[t.root];
  return res;
}

KValueCountsResult value_counts_k(const DTree& t, const Deadline& deadline) {
  FACTA_CHECK(t.root != kNoNode, "tree has no root");
  KValueCountsResult res;
  res.per_node.resize(t.dag_size());
  if (!t.node(t.root).semimodule) {
    FACTA_CHECK(t.node(t.root).kind == DKind::Const0,
                "value_counts applies to semimodule trees");
    res.root = KOutcomeDist{{OutcomeValue::bot(), KVec{1}}};
    return res;
  }
  SemiUpK up = semi_bottom_up_k(t, deadline);
  for (NodeId id : t.reachable())
    if (up.dist[id]) res.per_node[id] = remap_actual_k(t.monoid, *up.dist[id]);
  res.root = *res.per_node[t.root];
  return res;
}

std::map<VarId, Rational> minmax_attribution_counts(
    const BnpExpression& e, Measure measure, VarTable& vars,
    const CompileOptions& copts, const Deadline& deadline) {
  if (!monoid_idempotent(e.monoid))
    throw InputError("count-based attribution applies to MIN/MAX aggregates");
  std::map<VarId, Rational> out;
  const std::size_t n = e.universe.size();
  for (VarId v : e.universe) out[v] = 0;
  if (n == 0) return out;
  std::vector<Rational> coeff =
      measure == Measure::Shapley ? shapley_coefficients(n) : std::vector<Rational>{};

  for (VarId x : e.universe) {
    deadline.check();
    BnpExpression e1 = restrict_bnp(e, x, true);
    BnpExpression e0 = restrict_bnp(e, x, false);
    DTree t1 = compile_bnp(e1, vars, copts, deadline);
    DTree t0 = compile_bnp(e0, vars, copts, deadline);
    if (measure == Measure::Banzhaf) {
      OutcomeDist d1 = value_counts(t1, deadline).root;
      OutcomeDist d0 = value_counts(t0, deadline).root;
      BigInt s1 = pow2(n - 1 - nv(t1.node(t1.root)));
      BigInt s0 = pow2(n - 1 - nv(t0.node(t0.root)));
      Rational acc = 0;
      for (const auto& [k, c] : d1)
        if (!k.bottom) acc += k.value * Rational(c * s1);
      for (const auto& [k, c] : d0)
        if (!k.bottom) acc -= k.value * Rational(c * s0);
      out[x] = acc;
    } else {
      KOutcomeDist d1 = value_counts_k(t1, deadline).root;
      KOutcomeDist d0 = value_counts_k(t0, deadline).root;
      KVec p1 = binomial_row(n - 1 - nv(t1.node(t1.root)));
      KVec p0 = binomial_row(n - 1 - nv(t0.node(t0.root)));
      Rational acc = 0;
      for (const auto& [k, vec] : d1) {
        if (k.bottom) continue;
        KVec padded = conv(vec, p1);
        for (std::size_t j = 0; j < padded.size() && j < n; ++j)
          acc += k.value * coeff[j] * Rational(padded[j]);
      }
      for (const auto& [k, vec] : d0) {
        if (k.bottom) continue;
        KVec padded = conv(vec, p0);
        for (std::size_t j = 0; j < padded.size() && j < n; ++j)
          acc -= k.value * coeff[j] * Rational(padded[j]);
      }
      out[x] = acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// minmax_gradient
// ---------------------------------------------------------------------------

namespace {

using SensMap = std::map<OutcomeValue, Rational>;
using SensMapK = std::map<OutcomeValue, std::vector<Rational>>;

// Reverse-mode pass for the scalar (Banzhaf) case.
std::map<VarId, Rational> semi_backprop(const DTree& t, const SemiUp& up,
                                        const std::vector<VarId>& universe,
                                        const Deadline& deadline) {
  std::map<VarId, Rational> out;
  for (VarId v : universe) out[v] = 0;

  std::vector<NodeId> order = t.reachable();
  std::vector<SensMap> sSemi(t.dag_size());
  std::vector<Rational> gBool(t.dag_size(), Rational(0));

  const DNode& root = t.node(t.root);
  BigInt freeScale = pow2(universe.size() - nv(root));
  for (const auto& [k, c] : *up.dist[t.root])
    if (!k.bottom) sSemi[t.root][k] = k.value * Rational(freeScale);

  auto sensInto = [&](NodeId child, const OutcomeValue& key, const Rational& v) {
    if (v == 0) return;
    const DNode& cn = t.node(child);
    if (cn.semimodule)
      sSemi[child][key] += v;
    // Bottom constants have no parameters; their sensitivity is discarded.
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    deadline.check();
    NodeId id = *it;
    const DNode& n = t.node(id);
    if (n.semimodule) {
      const SensMap& s = sSemi[id];
      if (s.empty()) continue;
      switch (n.kind) {
        case DKind::Value:
          break;  // leaf; nothing below
        case DKind::IndOr: {
          // Walk the fold backwards: F_i = combine(F_{i-1}, child_i).
          const std::vector<OutcomeDist>& partials = up.orPartials[id];
          SensMap sF = s;
          for (std::size_t i = n.children.size(); i-- > 1;) {
            OutcomeDist childD = dist_of_child(t, up, n.children[i]);
            const OutcomeDist& prev = partials[i - 1];
            SensMap sPrev;
            for (const auto& [r, cr] : prev) {
              for (const auto& [tt, ct] : childD) {
                OutcomeValue q = vmax(r, tt);
                auto sq = sF.find(q);
                if (sq == sF.end() || sq->second == 0) continue;
                sensInto(n.children[i], tt, sq->second * Rational(cr));
                sPrev[r] += sq->second * Rational(ct);
              }
            }
            sF = std::move(sPrev);
          }
          for (const auto& [k, v] : sF) sensInto(n.children[0], k, v);
          break;
        }
        case DKind::ScalarMul: {
          NodeId mid = n.children.back();
          const OutcomeDist& M = *up.dist[mid];
          std::size_t nM = nv(t.node(mid));
          std::vector<BigInt> cs;
          BigInt cb = 1;
          for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
            cs.push_back(up.boolCount[n.children[i]]);
            cb *= cs.back();
          }
          Rational sBot(0);
          auto itBot = s.find(OutcomeValue::bot());
          if (itBot != s.end()) sBot = itBot->second;
          // Module sensitivities.
          for (const auto& [k, v] : s)
            sSemi[mid][k] += v * Rational(cb);
          // d out[bot] / d cb = M[bot] - 2^nM ; d out[p] / d cb = M[p].
          Rational gcb = 0;
          for (const auto& [k, c] : M) {
            auto sk = s.find(k);
            if (sk == s.end()) continue;
            gcb += sk->second * Rational(c);
          }
          gcb -= sBot * Rational(pow2(nM));
          if (gcb != 0) {
            std::vector<Rational> csr(cs.size());
            for (std::size_t i = 0; i < cs.size(); ++i) csr[i] = Rational(cs[i]);
            std::vector<Rational> ex = excluding_products(csr, Rational(1));
            for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
              gBool[n.children[i]] += gcb * ex[i];
          }
          break;
        }
        case DKind::Shannon: {
          NodeId fid = n.children[0], hid = n.children[1], lid = n.children[2];
          std::size_t nf = nv(t.node(fid));
          std::size_t w = nv(n) - nf;
          BigInt padH = pow2(w - nv(t.node(hid)));
          BigInt padL = pow2(w - nv(t.node(lid)));
          const BigInt& cf = up.boolCount[fid];
          BigInt ncf = pow2(nf) - cf;
          OutcomeDist H = dist_of_child(t, up, hid);
          OutcomeDist L = dist_of_child(t, up, lid);
          Rational gf = 0;
          for (const auto& [k, v] : s) {
            sensInto(hid, k, v * Rational(cf * padH));
            sensInto(lid, k, v * Rational(ncf * padL));
            auto ih = H.find(k);
            if (ih != H.end()) gf += v * Rational(ih->second * padH);
            auto il = L.find(k);
            if (il != L.end()) gf -= v * Rational(il->second * padL);
          }
          gBool[fid] += gf;
          break;
        }
        default:
          throw InternalError("unexpected semimodule node kind");
      }
    } else {
      const Rational& g = gBool[id];
      if (g == 0) continue;
      switch (n.kind) {
        case DKind::Var:
          out[n.var] += g;
          break;
        case DKind::IndAnd: {
          std::vector<Rational> cs;
          for (NodeId k : n.children) cs.push_back(Rational(up.boolCount[k]));
          std::vector<Rational> ex = excluding_products(cs, Rational(1));
          for (std::size_t i = 0; i < n.children.size(); ++i)
            gBool[n.children[i]] += g * ex[i];
          break;
        }
        case DKind::IndOr: {
          std::vector<Rational> qs;
          for (NodeId k : n.children)
            qs.push_back(Rational(pow2(nv(t.node(k))) - up.boolCount[k]));
          std::vector<Rational> ex = excluding_products(qs, Rational(1));
          for (std::size_t i = 0; i < n.children.size(); ++i)
            gBool[n.children[i]] += g * ex[i];  // two sign flips cancel
          break;
        }
        case DKind::Shannon: {
          NodeId fid = n.children[0], hid = n.children[1], lid = n.children[2];
          std::size_t nf = nv(t.node(fid));
          std::size_t w = nv(n) - nf;
          BigInt padH = pow2(w - nv(t.node(hid)));
          BigInt padL = pow2(w - nv(t.node(lid)));
          const BigInt& cf = up.boolCount[fid];
          gBool[fid] += g * Rational(up.boolCount[hid] * padH -
                                     up.boolCount[lid] * padL);
          gBool[hid] += g * Rational(cf * padH);
          gBool[lid] += g * Rational((pow2(nf) - cf) * padL);
          break;
        }
        default:
          break;  // constants
      }
    }
  }
  return out;
}

// Reverse-mode pass for the size-resolved (Shapley) case.
std::map<VarId, Rational> semi_backprop_k(const DTree& t, const SemiUpK& up,
                                          const std::vector<VarId>& universe,
                                          const Deadline& deadline) {
  std::map<VarId, Rational> out;
  for (VarId v : universe) out[v] = 0;
  const std::size_t n = universe.size();

  std::vector<NodeId> order = t.reachable();
  std::vector<SensMapK> sSemi(t.dag_size());
  std::vector<std::vector<Rational>> gBool(t.dag_size());
  for (NodeId id : order)
    if (!t.node(id).semimodule) gBool[id].assign(nv(t.node(id)) + 1, Rational(0));

  const DNode& root = t.node(t.root);
  const std::size_t rootVars = nv(root);
  const std::size_t pad = n - rootVars;
  std::vector<Rational> coeff = shapley_coefficients(n);
  std::vector<Rational> W(rootVars + 1, Rational(0));
  for (std::size_t j = 0; j <= rootVars; ++j)
    for (std::size_t k = j; k < n && k - j <= pad; ++k)
      W[j] += coeff[k] * Rational(binomial(pad, k - j));
  for (const auto& [k, vec] : *up.dist[t.root]) {
    if (k.bottom) continue;
    std::vector<Rational> seed(rootVars + 1, Rational(0));
    for (std::size_t i = 1; i <= rootVars; ++i) seed[i] = k.value * W[i - 1];
    sSemi[t.root][k] = std::move(seed);
  }

  auto addVec = [](std::vector<Rational>& slot, const std::vector<Rational>& v,
                   std::size_t len) {
    if (slot.size() < len) slot.resize(len, Rational(0));
    for (std::size_t i = 0; i < v.size() && i < len; ++i) slot[i] += v[i];
  };
  auto sensInto = [&](NodeId child, const OutcomeValue& key,
                      const std::vector<Rational>& v) {
    const DNode& cn = t.node(child);
    if (!cn.semimodule) return;  // Bottom constant
    addVec(sSemi[child][key], v, nv(cn) + 1);
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    deadline.check();
    NodeId id = *it;
    const DNode& node = t.node(id);
    if (node.semimodule) {
      const SensMapK& s = sSemi[id];
      if (s.empty()) continue;
      switch (node.kind) {
        case DKind::Value:
          break;
        case DKind::IndOr: {
          const std::vector<KOutcomeDist>& partials = up.orPartials[id];
          SensMapK sF = s;
          for (std::size_t i = node.children.size(); i-- > 1;) {
            KOutcomeDist childD = kdist_of_child(t, up, node.children[i]);
            const KOutcomeDist& prev = partials[i - 1];
            std::size_t nChild = t.node(node.children[i]).semimodule
                                     ? nv(t.node(node.children[i]))
                                     : 0;
            std::size_t nPrev = 0;
            for (const auto& [r, vec] : prev)
              nPrev = std::max(nPrev, vec.size() - 1);
            SensMapK sPrev;
            for (const auto& [r, cr] : prev) {
              for (const auto& [tt, ct] : childD) {
                OutcomeValue q = vmax(r, tt);
                auto sq = sF.find(q);
                if (sq == sF.end()) continue;
                sensInto(node.children[i], tt, corr(sq->second, cr, nChild + 1));
                addVec(sPrev[r], corr(sq->second, ct, nPrev + 1), nPrev + 1);
              }
            }
            sF = std::move(sPrev);
          }
          for (const auto& [k, v] : sF) sensInto(node.children[0], k, v);
          break;
        }
        case DKind::ScalarMul: {
          NodeId mid = node.children.back();
          const KOutcomeDist& M = *up.dist[mid];
          std::size_t nM = nv(t.node(mid));
          std::vector<KVec> bools;
          KVec mb{1};
          std::size_t nb = 0;
          for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
            bools.push_back(up.boolK[node.children[i]]);
            mb = conv(mb, bools.back());
            nb += nv(t.node(node.children[i]));
          }
          // Module sensitivities: out[k] couples to M[k] through conv(mb, .).
          for (const auto& [k, v] : s)
            addVec(sSemi[mid][k], corr(v, mb, nM + 1), nM + 1);
          // mb sensitivities.
          std::vector<Rational> gmb(nb + 1, Rational(0));
          for (const auto& [k, v] : s) {
            auto im = M.find(k);
            if (im != M.end()) {
              std::vector<Rational> a = corr(v, im->second, nb + 1);
              for (std::size_t j = 0; j <= nb; ++j) gmb[j] += a[j];
            }
            if (k.bottom) {
              // out[bot] also carries conv(binom(nb)-mb, binom(nM)).
              std::vector<Rational> a = corr(v, binomial_row(nM), nb + 1);
              for (std::size_t j = 0; j <= nb; ++j) gmb[j] -= a[j];
            }
          }
          std::vector<KVec> ex = excluding_convs(bools);
          for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
            std::vector<Rational> add =
                corr(gmb, ex[i], nv(t.node(node.children[i])) + 1);
            for (std::size_t j = 0; j < add.size(); ++j)
              gBool[node.children[i]][j] += add[j];
          }
          break;
        }
        case DKind::Shannon: {
          NodeId fid = node.children[0], hid = node.children[1], lid = node.children[2];
          std::size_t nf = nv(t.node(fid));
          std::size_t w = nv(node) - nf;
          std::size_t nH = t.node(hid).semimodule ? nv(t.node(hid)) : 0;
          std::size_t nL = t.node(lid).semimodule ? nv(t.node(lid)) : 0;
          KVec bH = binomial_row(w - nH);
          KVec bL = binomial_row(w - nL);
          KVec mfH = conv(up.boolK[fid], bH);
          KVec nmfL = conv(nonmodels(up.boolK[fid], nf), bL);
          KOutcomeDist H = kdist_of_child(t, up, hid);
          KOutcomeDist L = kdist_of_child(t, up, lid);
          std::vector<Rational> gf(nf + 1, Rational(0));
          for (const auto& [k, v] : s) {
            sensInto(hid, k, corr(v, mfH, nH + 1));
            sensInto(lid, k, corr(v, nmfL, nL + 1));
            auto ih = H.find(k);
            if (ih != H.end()) {
              std::vector<Rational> a = corr(v, conv(ih->second, bH), nf + 1);
              for (std::size_t j = 0; j <= nf; ++j) gf[j] += a[j];
            }
            auto il = L.find(k);
            if (il != L.end()) {
              std::vector<Rational> a = corr(v, conv(il->second, bL), nf + 1);
              for (std::size_t j = 0; j <= nf; ++j) gf[j] -= a[j];
            }
          }
          for (std::size_t j = 0; j <= nf; ++j) gBool[fid][j] += gf[j];
          break;
        }
        default:
          throw InternalError("unexpected semimodule node kind");
      }
    } else {
      const std::vector<Rational>& g = gBool[id];
      bool allZero = true;
      for (const Rational& x : g)
        if (x != 0) {
          allZero = false;
          break;
        }
      if (allZero) continue;
      switch (node.kind) {
        case DKind::Var:
          out[node.var] += g[1];
          break;
        case DKind::IndAnd: {
          std::vector<KVec> kid;
          for (NodeId k : node.children) kid.push_back(up.boolK[k]);
          std::vector<KVec> ex = excluding_convs(kid);
          for (std::size_t i = 0; i < node.children.size(); ++i) {
            std::vector<Rational> add =
                corr(g, ex[i], nv(t.node(node.children[i])) + 1);
            for (std::size_t j = 0; j < add.size(); ++j)
              gBool[node.children[i]][j] += add[j];
          }
          break;
        }
        case DKind::IndOr: {
          std::vector<KVec> kid;
          for (NodeId k : node.children)
            kid.push_back(nonmodels(up.boolK[k], nv(t.node(k))));
          std::vector<KVec> ex = excluding_convs(kid);
          for (std::size_t i = 0; i < node.children.size(); ++i) {
            std::vector<Rational> add =
                corr(g, ex[i], nv(t.node(node.children[i])) + 1);
            for (std::size_t j = 0; j < add.size(); ++j)
              gBool[node.children[i]][j] += add[j];
          }
          break;
        }
        case DKind::Shannon: {
          NodeId fid = node.children[0], hid = node.children[1], lid = node.children[2];
          std::size_t nf = nv(t.node(fid));
          std::size_t w = nv(node) - nf;
          KVec bH = binomial_row(w - nv(t.node(hid)));
          KVec bL = binomial_row(w - nv(t.node(lid)));
          KVec nmf = nonmodels(up.boolK[fid], nf);
          std::vector<Rational> a = corr(g, conv(up.boolK[hid], bH), nf + 1);
          std::vector<Rational> b = corr(g, conv(up.boolK[lid], bL), nf + 1);
          for (std::size_t j = 0; j <= nf; ++j) gBool[fid][j] += a[j] - b[j];
          std::vector<Rational> h =
              corr(g, conv(up.boolK[fid], bH), nv(t.node(hid)) + 1);
          for (std::size_t j = 0; j < h.size(); ++j) gBool[hid][j] += h[j];
          std::vector<Rational> l = corr(g, conv(nmf, bL), nv(t.node(lid)) + 1);
          for (std::size_t j = 0; j < l.size(); ++j) gBool[lid][j] += l[j];
          break;
        }
        default:
          break;  // constants
      }
    }
  }
  return out;
}

}  // namespace

std::map<VarId, Rational> minmax_gradient(const DTree& t, MonoidKind monoid,
                                          const std::vector<VarId>& universe,
                                          Measure measure, const Deadline& deadline) {
  FACTA_CHECK(monoid_idempotent(monoid), "minmax_gradient needs MIN/MAX");
  std::map<VarId, Rational> out;
  for (VarId v : universe) out[v] = 0;
  if (universe.empty()) return out;
  const DNode& root = t.node(t.root);
  if (!root.semimodule) {
    FACTA_CHECK(root.kind == DKind::Const0,
                "minmax_gradient applies to semimodule trees");
    return out;  // constant Bottom: all marginals 0
  }
  for (VarId v : root.vars)
    if (!std::binary_search(universe.begin(), universe.end(), v))
      throw InputError("universe does not cover the tree's variables");

  if (measure == Measure::Banzhaf) {
    SemiUp up = semi_bottom_up(t, deadline);
    out = semi_backprop(t, up, universe, deadline);
  } else {
    SemiUpK up = semi_bottom_up_k(t, deadline);
    out = semi_backprop_k(t, up, universe, deadline);
  }
  if (monoid == MonoidKind::Min)
    for (auto& [v, val] : out) val = -val;
  return out;
}

}  // namespace facta
