// SPDX-License-Identifier: MIT

#include "oracle.hpp"

#include <algorithm>
#include <bit>

namespace facta {

namespace {

// Enumeration workspace: universe positions are assigned in name-lexicographic
// order; clauses become bitmasks over those positions.
struct MaskSpace {
  std::vector<VarId> order;               // position -> VarId
  std::map<VarId, std::size_t> position;  // VarId -> position

  explicit MaskSpace(const std::vector<VarId>& universe, const VarTable& vars) {
    if (universe.size() > kOracleMaxVars)
      throw InputError("oracle refuses universes larger than " +
                       std::to_string(kOracleMaxVars) + " variables (got " +
                       std::to_string(universe.size()) + ")");
    order = sorted_by_name(universe, vars);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  }

  std::uint32_t clause_mask(const Clause& c) const {
    std::uint32_t m = 0;
    for (VarId v : c) m |= 1u << position.at(v);
    return m;
  }
};

struct MaskedDnf {
  std::vector<std::uint32_t> clauses;
  bool eval(std::uint32_t world) const {
    for (std::uint32_t c : clauses)
      if ((world & c) == c) return true;
    return false;
  }
};

struct MaskedBnp {
  MonoidKind monoid{};
  std::vector<MaskedDnf> guards;
  std::vector<Rational> values;

  OutcomeValue eval(std::uint32_t world) const {
    OutcomeValue acc = OutcomeValue::bot();
    for (std::size_t i = 0; i < guards.size(); ++i) {
      if (!guards[i].eval(world)) continue;
      if (acc.bottom) {
        acc = OutcomeValue::of(values[i]);
        continue;
      }
      switch (monoid) {
        case MonoidKind::Sum:
        case MonoidKind::Count: acc.value += values[i]; break;
        case MonoidKind::Min: acc.value = std::min(acc.value, values[i]); break;
        case MonoidKind::Max: acc.value = std::max(acc.value, values[i]); break;
      }
    }
    return acc;
  }
};

MaskedDnf mask_dnf(const DnfFormula& f, const MaskSpace& space) {
  MaskedDnf out;
  out.clauses.reserve(f.clauses.size());
  for (const Clause& c : f.clauses) out.clauses.push_back(space.clause_mask(c));
  return out;
}

MaskedBnp mask_bnp(const BnpExpression& e, const MaskSpace& space) {
  MaskedBnp out;
  out.monoid = e.monoid;
  for (const BnpTerm& t : e.terms) {
    out.guards.push_back(mask_dnf(t.formula, space));
    out.values.push_back(t.value);
  }
  return out;
}

}  // namespace

std::vector<Rational> shapley_coefficients(std::size_t n) {
  std::vector<Rational> coeff(n);
  if (n == 0) return coeff;
  BigInt nfact = 1;
  for (std::size_t i = 2; i <= n; ++i) nfact *= static_cast<unsigned long>(i);
  BigInt kfact = 1;  // k!
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) kfact *= static_cast<unsigned long>(k);
    BigInt rest = 1;  // (n-k-1)!
    for (std::size_t i = 2; i <= n - k - 1; ++i) rest *= static_cast<unsigned long>(i);
    coeff[k] = Rational(kfact * rest, nfact);
  }
  return coeff;
}

BruteCounts brute_counts(const Lineage& lineage, const VarTable& vars,
                         const Deadline& deadline) {
  const std::vector<VarId>& universe = universe_of(lineage);
  MaskSpace space(universe, vars);
  const std::size_t n = universe.size();
  const std::uint64_t total = std::uint64_t(1) << n;

  BruteCounts out;
  out.k_counts.assign(n + 1, 0);

  if (std::holds_alternative<DnfFormula>(lineage)) {
    MaskedDnf f = mask_dnf(std::get<DnfFormula>(lineage), space);
    for (std::uint64_t w = 0; w < total; ++w) {
      deadline.check();
      if (f.eval(static_cast<std::uint32_t>(w))) {
        ++out.model_count;
        ++out.k_counts[std::popcount(static_cast<std::uint32_t>(w))];
      }
    }
  } else {
    MaskedBnp e = mask_bnp(std::get<BnpExpression>(lineage), space);
    for (std::uint64_t w = 0; w < total; ++w) {
      deadline.check();
      OutcomeValue o = e.eval(static_cast<std::uint32_t>(w));
      ++out.outcome_counts[o];
      auto& kvec = out.k_outcome_counts[o];
      if (kvec.empty()) kvec.assign(n + 1, 0);
      ++kvec[std::popcount(static_cast<std::uint32_t>(w))];
      if (!o.bottom) {
        ++out.model_count;  // "some term satisfied" count, handy in tests
        ++out.k_counts[std::popcount(static_cast<std::uint32_t>(w))];
      }
    }
  }
  return out;
}

BruteAttribution brute_attribution(const Lineage& lineage, const VarTable& vars,
                                   const Deadline& deadline) {
  const std::vector<VarId>& universe = universe_of(lineage);
  MaskSpace space(universe, vars);
  const std::size_t n = universe.size();
  FACTA_CHECK(n <= kOracleMaxVars, "mask space validated the cap");

  BruteAttribution out;
  for (VarId v : universe) {
    out.banzhaf[v] = 0;
    out.shapley[v] = 0;
  }
  if (n == 0) return out;

  const std::uint64_t total = std::uint64_t(1) << n;
  std::vector<Rational> coeff = shapley_coefficients(n);

  // One pass computing val(world) for every world, then per-variable
  // marginals val(Y + x) - val(Y) grouped by |Y|.
  std::vector<Rational> val(total);
  bool numericBool = std::holds_alternative<DnfFormula>(lineage);
  if (numericBool) {
    MaskedDnf f = mask_dnf(std::get<DnfFormula>(lineage), space);
    for (std::uint64_t w = 0; w < total; ++w) {
      deadline.check();
      val[w] = f.eval(static_cast<std::uint32_t>(w)) ? 1 : 0;
    }
  } else {
    MaskedBnp e = mask_bnp(std::get<BnpExpression>(lineage), space);
    for (std::uint64_t w = 0; w < total; ++w) {
      deadline.check();
      OutcomeValue o = e.eval(static_cast<std::uint32_t>(w));
      val[w] = o.bottom ? Rational(0) : o.value;
    }
  }

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::uint64_t bit = std::uint64_t(1) << pos;
    std::vector<Rational> perSize(n, 0);  // sum of marginals with |Y| = k
    for (std::uint64_t w = 0; w < total; ++w) {
      deadline.check();
      if (w & bit) continue;
      Rational diff = val[w | bit] - val[w];
      if (diff != 0) perSize[std::popcount(static_cast<std::uint32_t>(w))] += diff;
    }
    Rational banzhaf = 0, shapley = 0;
    for (std::size_t k = 0; k < n; ++k) {
      banzhaf += perSize[k];
      shapley += coeff[k] * perSize[k];
    }
    VarId v = space.order[pos];
    out.banzhaf[v] = banzhaf;
    out.shapley[v] = shapley;
  }
  return out;
}

Rational brute_banzhaf(const Lineage& lineage, const VarTable& vars, VarId x) {
  return brute_attribution(lineage, vars).banzhaf.at(x);
}

Rational brute_shapley(const Lineage& lineage, const VarTable& vars, VarId x) {
  return brute_attribution(lineage, vars).shapley.at(x);
}

}  // namespace facta
