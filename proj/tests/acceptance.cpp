// SPDX-License-Identifier: MIT
//
// Acceptance checks. Each criterion is one numbered check with pinned
// parameters and seeds; the binary takes the criterion number, prints
// diagnostics (if any) followed by a single final verdict line
//   criterion <n>: PASS|FAIL <summary>
// and exits 0 on pass, 1 on fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "attribution.hpp"
#include "compile.hpp"
#include "engine.hpp"
#include "lifting.hpp"
#include "lineage.hpp"
#include "lineage_io.hpp"
#include "oracle.hpp"

using namespace facta;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string summary;
};

// ------------------------------------------------------------ fixtures ----

DnfFormula mk_dnf(VarTable& vars,
                  const std::vector<std::vector<std::string>>& clauses) {
  DnfFormula f;
  std::set<VarId> uni;
  for (const auto& names : clauses) {
    Clause c;
    for (const auto& n : names) c.push_back(vars.intern(n));
    normalize_clause(c);
    for (VarId v : c) uni.insert(v);
    f.clauses.push_back(std::move(c));
  }
  f.universe.assign(uni.begin(), uni.end());
  return canonicalize(f, vars);
}

// The worked boolean query: 10 clauses over {a1,a2,a3,m2,m3,d1,d2}.
DnfFormula make_q1(VarTable& vars) {
  std::vector<std::vector<std::string>> clauses;
  for (const char* d : {"d1", "d2"}) {
    for (const char* a : {"a1", "a2", "a3"}) clauses.push_back({a, "m3", d});
    for (const char* a : {"a1", "a3"}) clauses.push_back({a, "m2", d});
  }
  return mk_dnf(vars, clauses);
}

// The worked MAX aggregate over {a1..a4, m1..m3}.
BnpExpression make_q2_max(VarTable& vars) {
  struct TermSpec {
    std::vector<std::vector<std::string>> clauses;
    long long value;
  };
  const TermSpec specs[] = {
      {{{"a1", "m3"}, {"a2", "m3"}, {"a3", "m3"}}, 377},
      {{{"a1", "m2"}, {"a3", "m2"}}, 322},
      {{{"a4", "m1"}}, 176},
  };
  BnpExpression e;
  e.monoid = MonoidKind::Max;
  std::set<VarId> uni;
  for (const TermSpec& s : specs) {
    BnpTerm t;
    t.value = s.value;
    for (const auto& names : s.clauses) {
      Clause c;
      for (const auto& n : names) c.push_back(vars.intern(n));
      normalize_clause(c);
      for (VarId v : c) uni.insert(v);
      t.formula.clauses.push_back(std::move(c));
    }
    e.terms.push_back(std::move(t));
  }
  e.universe.assign(uni.begin(), uni.end());
  for (BnpTerm& t : e.terms) {
    t.formula.universe = e.universe;
    t.formula = canonicalize(t.formula, vars);
  }
  validate_bnp(e, vars);
  return e;
}

Valuation mask_valuation(const std::vector<VarId>& universe, unsigned mask) {
  Valuation tv;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1u << i)) tv.push_back(universe[i]);
  std::sort(tv.begin(), tv.end());
  return tv;
}

std::string dist_str(const std::map<OutcomeValue, BigInt>& d) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [o, c] : d) {
    if (!first) out << ", ";
    first = false;
    out << o.str() << ":" << c;
  }
  out << "}";
  return out.str();
}

// Pinned corpus for criteria 3, 5, 6: 500 canonical DNFs, 4-12 variables,
// up to 20 clauses, clause width up to 4.
constexpr std::uint64_t kBooleanCorpusSeed = 0xFAC7A;
constexpr int kBooleanCorpusSize = 500;

DnfFormula corpus_dnf(std::mt19937_64& rng, VarTable& vars) {
  int n = 4 + static_cast<int>(rng() % 9);       // 4..12 variables
  int m = 1 + static_cast<int>(rng() % 20);      // 1..20 clauses
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::vector<std::string>> clauses;
  for (int c = 0; c < m; ++c) {
    int w = 1 + static_cast<int>(rng() % 4);     // width 1..4
    if (w > n) w = n;
    std::set<std::string> cl;
    while (static_cast<int>(cl.size()) < w)
      cl.insert(names[rng() % static_cast<std::uint64_t>(n)]);
    clauses.emplace_back(cl.begin(), cl.end());
  }
  DnfFormula f = mk_dnf(vars, clauses);
  // Keep unmentioned variables in the universe (they carry attribution 0).
  std::set<VarId> uni(f.universe.begin(), f.universe.end());
  for (const auto& nm : names) uni.insert(vars.intern(nm));
  f.universe.assign(uni.begin(), uni.end());
  return f;
}

// Pinned corpus for criteria 4, 6: per monoid, 200 BNPs with <= 10
// variables, <= 6 terms, integer values 1..9.
constexpr std::uint64_t kAggregateCorpusSeed = 0xB14B0;
constexpr int kAggregateCorpusSize = 200;

BnpExpression corpus_bnp(std::mt19937_64& rng, VarTable& vars,
                         MonoidKind monoid) {
  int n = 2 + static_cast<int>(rng() % 9);  // 2..10 variables
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  BnpExpression e;
  e.monoid = monoid;
  std::set<VarId> uni;
  int terms = 1 + static_cast<int>(rng() % 6);  // 1..6 terms
  for (int t = 0; t < terms; ++t) {
    BnpTerm term;
    long long value = 1 + static_cast<long long>(rng() % 9);  // 1..9
    if (monoid == MonoidKind::Count) value = 1;
    term.value = value;
    int m = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < m; ++c) {
      int w = 1 + static_cast<int>(rng() % 3);
      if (w > n) w = n;
      std::set<VarId> cl;
      while (static_cast<int>(cl.size()) < w)
        cl.insert(vars.intern(names[rng() % static_cast<std::uint64_t>(n)]));
      Clause clause(cl.begin(), cl.end());
      for (VarId v : clause) uni.insert(v);
      term.formula.clauses.push_back(std::move(clause));
    }
    e.terms.push_back(std::move(term));
  }
  for (const auto& nm : names) uni.insert(vars.intern(nm));
  e.universe.assign(uni.begin(), uni.end());
  for (BnpTerm& t : e.terms) {
    t.formula.universe = e.universe;
    t.formula = canonicalize(t.formula, vars);
  }
  validate_bnp(e, vars);
  return e;
}

bool same_map(const std::map<VarId, Rational>& a,
              const std::map<VarId, Rational>& b) {
  return a == b;
}

// ----------------------------------------------------------- criteria -----

// Worked boolean query: exact root probability and Banzhaf values.
Outcome criterion1() {
  auto t0 = Clock::now();
  VarTable vars;
  DnfFormula q1 = make_q1(vars);
  DTree t = compile_dnf(q1, vars);
  BanzhafRun run = gradient_banzhaf(t, q1.universe);

  bool ok = run.root_probability == Rational(30, 64);
  const std::pair<const char*, long> expected[] = {
      {"d1", 20}, {"d2", 20}, {"a1", 12}, {"a3", 12},
      {"a2", 6},  {"m2", 18}, {"m3", 24}};
  for (const auto& [name, want] : expected) {
    Rational got = run.attribution.at(*vars.find(name));
    if (got != want) {
      std::printf("  banzhaf(%s) = %s, expected %ld\n", name,
                  format_fraction(got).c_str(), want);
      ok = false;
    }
  }
  double dt = secs_since(t0);
  if (dt >= 1.0) {
    std::printf("  runtime %.3fs exceeds the 1s budget\n", dt);
    ok = false;
  }
  return {ok, "root probability 30/64 and all seven Banzhaf values exact"};
}

// Worked MAX aggregate: root outcome distribution and a sub-node
// distribution, exact equality against the stated values.
Outcome criterion2() {
  auto t0 = Clock::now();
  VarTable vars;
  BnpExpression q2 = make_q2_max(vars);
  DTree t = compile_bnp(q2, vars);
  ValueCountsResult vc = value_counts(t);

  // Stated expectation for the root (normalized to 2^7 total mass).
  OutcomeDist expectedRoot;
  expectedRoot[OutcomeValue::of(Rational(176))] = 18;
  expectedRoot[OutcomeValue::of(Rational(322))] = 20;
  expectedRoot[OutcomeValue::of(Rational(377))] = 36;
  expectedRoot[OutcomeValue::bot()] = 54;

  // The compiled tree spans all 7 universe variables here, so the root
  // distribution needs no padding.
  OutcomeDist gotRoot = vc.root;

  bool rootOk = gotRoot == expectedRoot;
  if (!rootOk) {
    std::printf("  root distribution mismatch\n");
    std::printf("    expected: %s\n", dist_str(expectedRoot).c_str());
    std::printf("    computed: %s\n", dist_str(gotRoot).c_str());
    // Cross-check the computed distribution against definition-level
    // enumeration of all 2^7 valuations.
    BruteCounts bc = brute_counts(q2, vars);
    std::printf("    enumeration of all 128 valuations: %s\n",
                dist_str(bc.outcome_counts).c_str());
    if (gotRoot == bc.outcome_counts)
      std::printf(
          "    computed values match exhaustive enumeration; the expected "
          "values are not attainable for this lineage\n");
  }

  // Sub-node: some semimodule node isolating {322:1, 377:2}.
  bool subOk = false;
  for (const auto& dist : vc.per_node) {
    if (!dist) continue;
    auto v322 = dist->find(OutcomeValue::of(Rational(322)));
    auto v377 = dist->find(OutcomeValue::of(Rational(377)));
    if (v322 != dist->end() && v377 != dist->end() && v322->second == 1 &&
        v377->second == 2)
      subOk = true;
  }
  if (!subOk) std::printf("  no sub-node carries {322:1, 377:2}\n");

  double dt = secs_since(t0);
  bool timeOk = dt < 1.0;
  if (!timeOk) std::printf("  runtime %.3fs exceeds the 1s budget\n", dt);

  return {rootOk && subOk && timeOk,
          rootOk ? "root and sub-node distributions exact"
                 : "root distribution differs from the stated values "
                   "(computed values verified by exhaustive enumeration)"};
}

// Boolean oracle equivalence on the pinned 500-instance corpus.
Outcome criterion3() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(kBooleanCorpusSeed);
  for (int i = 0; i < kBooleanCorpusSize; ++i) {
    VarTable vars;
    DnfFormula f = corpus_dnf(rng, vars);
    DTree t = compile_dnf(f, vars);
    BruteAttribution ba = brute_attribution(f, vars);
    if (!same_map(gradient_banzhaf(t, f.universe).attribution, ba.banzhaf)) {
      std::printf("  banzhaf mismatch on instance %d\n", i);
      return {false, "gradient disagreed with the oracle"};
    }
    if (!same_map(gradient_shapley(t, f.universe), ba.shapley)) {
      std::printf("  shapley mismatch on instance %d\n", i);
      return {false, "gradient disagreed with the oracle"};
    }
  }
  double dt = secs_since(t0);
  if (dt >= 300) {
    std::printf("  runtime %.1fs exceeds the 5 min budget\n", dt);
    return {false, "runtime budget exceeded"};
  }
  std::ostringstream s;
  s << kBooleanCorpusSize
    << " random DNFs: Banzhaf and Shapley match the oracle exactly ("
    << std::fixed << std::setprecision(1) << dt << "s)";
  return {true, s.str()};
}

// Aggregate oracle equivalence, 200 instances per monoid.
Outcome criterion4() {
  auto t0 = Clock::now();
  const MonoidKind monoids[] = {MonoidKind::Sum, MonoidKind::Count,
                                MonoidKind::Max, MonoidKind::Min};
  for (MonoidKind monoid : monoids) {
    std::mt19937_64 rng(kAggregateCorpusSeed ^ static_cast<int>(monoid));
    for (int i = 0; i < kAggregateCorpusSize; ++i) {
      VarTable vars;
      BnpExpression e = corpus_bnp(rng, vars, monoid);
      BruteAttribution ba = brute_attribution(e, vars);
      bool ok = true;
      if (monoid_idempotent(monoid)) {
        DTree t = compile_bnp(e, vars);
        ok = ok &&
             same_map(minmax_gradient(t, monoid, e.universe, Measure::Banzhaf),
                      ba.banzhaf) &&
             same_map(minmax_gradient(t, monoid, e.universe, Measure::Shapley),
                      ba.shapley) &&
             same_map(minmax_attribution_counts(e, Measure::Banzhaf, vars),
                      ba.banzhaf) &&
             same_map(minmax_attribution_counts(e, Measure::Shapley, vars),
                      ba.shapley);
      } else {
        ok = ok &&
             same_map(linear_aggregate_attribution(e, Measure::Banzhaf, vars),
                      ba.banzhaf) &&
             same_map(linear_aggregate_attribution(e, Measure::Shapley, vars),
                      ba.shapley);
      }
      if (!ok) {
        std::printf("  mismatch: monoid %s, instance %d\n",
                    monoid_name(monoid), i);
        return {false, "a method disagreed with the oracle"};
      }
    }
  }
  double dt = secs_since(t0);
  if (dt >= 600) {
    std::printf("  runtime %.1fs exceeds the 10 min budget\n", dt);
    return {false, "runtime budget exceeded"};
  }
  std::ostringstream s;
  s << "4 monoids x " << kAggregateCorpusSize
    << " BNPs: every applicable method matches the oracle exactly ("
    << std::fixed << std::setprecision(1) << dt << "s)";
  return {true, s.str()};
}

// Lifting soundness on the boolean corpus: semantics preserved on every
// valuation, outputs saturated, bindings read-once and pairwise disjoint.
Outcome criterion5() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(kBooleanCorpusSeed);
  for (int i = 0; i < kBooleanCorpusSize; ++i) {
    VarTable vars;
    DnfFormula f = corpus_dnf(rng, vars);
    LiftedFormula lf = lift(f, vars);
    try {
      check_lifted_invariants(lf, vars);  // read-once + disjoint + bound
    } catch (const Error& e) {
      std::printf("  invariants violated on instance %d: %s\n", i, e.what());
      return {false, "lifted invariants violated"};
    }
    if (!is_saturated(lf, vars)) {
      std::printf("  instance %d not saturated\n", i);
      return {false, "lift output not saturated"};
    }
    std::vector<VarId> mentioned = formula_vars(f);
    for (unsigned mask = 0; mask < (1u << mentioned.size()); ++mask) {
      Valuation tv = mask_valuation(mentioned, mask);
      if (eval_lifted(lf, tv) != eval_dnf(f, tv)) {
        std::printf("  semantics changed on instance %d, mask %u\n", i, mask);
        return {false, "inlined lift disagrees with the original formula"};
      }
    }
  }
  double dt = secs_since(t0);
  if (dt >= 300) {
    std::printf("  runtime %.1fs exceeds the 5 min budget\n", dt);
    return {false, "runtime budget exceeded"};
  }
  std::ostringstream s;
  s << kBooleanCorpusSize
    << " instances: equivalence on all valuations, saturated, read-once, "
       "disjoint ("
    << std::fixed << std::setprecision(1) << dt << "s)";
  return {true, s.str()};
}

// Shapley efficiency on every instance of criteria 3 and 4.
Outcome criterion6() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(kBooleanCorpusSeed);
  for (int i = 0; i < kBooleanCorpusSize; ++i) {
    VarTable vars;
    DnfFormula f = corpus_dnf(rng, vars);
    DTree t = compile_dnf(f, vars);
    auto sh = gradient_shapley(t, f.universe);
    Rational total = 0;
    for (const auto& [v, r] : sh) total += r;
    Valuation full = f.universe;
    Rational target = Rational(eval_dnf(f, full) ? 1 : 0) -
                      Rational(eval_dnf(f, {}) ? 1 : 0);
    if (total != target) {
      std::printf("  efficiency violated on boolean instance %d\n", i);
      return {false, "Shapley values do not sum to the query delta"};
    }
  }
  const MonoidKind monoids[] = {MonoidKind::Sum, MonoidKind::Count,
                                MonoidKind::Max, MonoidKind::Min};
  for (MonoidKind monoid : monoids) {
    std::mt19937_64 arng(kAggregateCorpusSeed ^ static_cast<int>(monoid));
    for (int i = 0; i < kAggregateCorpusSize; ++i) {
      VarTable vars;
      BnpExpression e = corpus_bnp(arng, vars, monoid);
      std::map<VarId, Rational> sh;
      if (monoid_idempotent(monoid)) {
        DTree t = compile_bnp(e, vars);
        sh = minmax_gradient(t, monoid, e.universe, Measure::Shapley);
      } else {
        sh = linear_aggregate_attribution(e, Measure::Shapley, vars);
      }
      Rational total = 0;
      for (const auto& [v, r] : sh) total += r;
      Valuation full = e.universe;
      Rational target = eval_bnp(e, full) - eval_bnp(e, {});
      if (total != target) {
        std::printf("  efficiency violated: monoid %s, instance %d\n",
                    monoid_name(monoid), i);
        return {false, "Shapley values do not sum to the query delta"};
      }
    }
  }
  std::ostringstream s;
  s << "sum of Shapley values equals the full-minus-empty query delta on all "
    << kBooleanCorpusSize << " + 4x" << kAggregateCorpusSize << " instances ("
    << std::fixed << std::setprecision(1) << secs_since(t0) << "s)";
  return {true, s.str()};
}

// Lifting benefit on a generated corpus with duplicated variables.
Outcome criterion7() {
  auto t0 = Clock::now();
  std::vector<double> ratios;
  for (int i = 0; i < 100; ++i) {
    GeneratorParams p;
    p.vars = 4 + (i % 5);         // 4..8 base variables
    p.clauses = 5 + (i % 6);      // 5..10 base clauses
    p.width = 2 + (i % 2);        // clause width 2 or 3
    p.duplication = 2 + (i % 3);  // 2, 3, 4
    p.seed = 1000 + static_cast<std::uint64_t>(i);
    Instance inst = load_lineage_string(generate(p), "json", "gen");

    VarTable liftVars = inst.vars;
    DTree lifted = compile_dnf(inst.dnf(), liftVars);
    VarTable rawVars = inst.vars;
    DTree raw =
        compile_dnf(inst.dnf(), rawVars, CompileOptions{.lift = false});
    BigInt ls = tree_stats(lifted).size;
    BigInt rs = tree_stats(raw).size;
    if (ls > rs) {
      std::printf("  instance %d: lifted size %s > unlifted %s\n", i,
                  ls.str().c_str(), rs.str().c_str());
      return {false, "lifting grew a tree"};
    }
    ratios.push_back(to_double(Rational(ls, rs)));
  }
  std::sort(ratios.begin(), ratios.end());
  double median = ratios[ratios.size() / 2];
  double dt = secs_since(t0);
  bool ok = median <= 0.5 && dt < 300;
  if (median > 0.5)
    std::printf("  median size ratio %.3f exceeds 0.5\n", median);
  if (dt >= 300) std::printf("  runtime %.1fs exceeds the 5 min budget\n", dt);
  std::ostringstream s;
  s << "100 duplicated-variable instances: lifted <= unlifted everywhere, "
       "median size ratio "
    << std::fixed << std::setprecision(3) << median << " (" << std::setprecision(1)
    << dt << "s)";
  return {ok, s.str()};
}

// Gradient benefit: one backward pass vs per-variable root-probability
// differences on >= 200-variable instances.
Outcome criterion8() {
  std::vector<double> speedups;
  for (int i = 0; i < 20; ++i) {
    GeneratorParams p;
    p.vars = 100;
    p.clauses = 25;
    p.width = 2;
    p.duplication = 2;  // universe: 200 variables
    p.seed = 9000 + static_cast<std::uint64_t>(i);
    Instance inst = load_lineage_string(generate(p), "json", "gen");
    VarTable vars = inst.vars;
    DTree t = compile_dnf(inst.dnf(), vars);
    const std::vector<VarId>& universe = inst.universe();
    if (universe.size() < 200) {
      std::printf("  instance %d has %zu < 200 variables\n", i,
                  universe.size());
      return {false, "generator produced too few variables"};
    }

    // One full gradient pass, repeated until the clock resolves it.
    int reps = 0;
    auto g0 = Clock::now();
    std::map<VarId, Rational> viaGradient;
    do {
      viaGradient = gradient_banzhaf(t, universe).attribution;
      ++reps;
    } while (secs_since(g0) < 0.02);
    double gradientSecs = secs_since(g0) / reps;

    // Baseline: per variable, two substituted root probabilities.
    auto b0 = Clock::now();
    std::map<VarId, Rational> viaBaseline;
    BigInt scale = pow2(universe.size() - 1);
    for (VarId x : universe) {
      Rational hi = root_probability_with(t, std::make_pair(x, true));
      Rational lo = root_probability_with(t, std::make_pair(x, false));
      viaBaseline[x] = (hi - lo) * Rational(scale);
    }
    double baselineSecs = secs_since(b0);

    if (i == 0 && viaBaseline != viaGradient)
      return {false, "baseline and gradient disagree"};
    speedups.push_back(baselineSecs / gradientSecs);
  }
  std::sort(speedups.begin(), speedups.end());
  double median = speedups[speedups.size() / 2];
  bool ok = median >= 10.0;
  if (!ok) std::printf("  median speedup %.1fx below 10x\n", median);
  std::ostringstream s;
  s << "200-variable instances: gradient pass is " << std::fixed
    << std::setprecision(1) << median
    << "x faster than per-variable probability differences (median of 20)";
  return {ok, s.str()};
}

// Scaling smoke: gradient wall time vs tree size, log-log slope < 1.5.
Outcome criterion9() {
  std::vector<double> xs, ys;
  double minX = 0, maxX = 0;
  // Fixed 320-variable universe; node counts scale with clause density, so
  // per-node arithmetic cost stays flat across the ladder.
  for (int clauses : {10, 20, 40, 80, 160}) {
    GeneratorParams p;
    p.vars = 160;
    p.clauses = clauses;
    p.width = 2;
    p.duplication = 2;
    p.seed = 7700 + static_cast<std::uint64_t>(clauses);
    Instance inst = load_lineage_string(generate(p), "json", "gen");
    VarTable vars = inst.vars;
    DTree t = compile_dnf(inst.dnf(), vars);
    double nodes = static_cast<double>(tree_stats(t).dag_size);

    int reps = 0;
    auto g0 = Clock::now();
    do {
      gradient_banzhaf(t, inst.universe());
      ++reps;
    } while (secs_since(g0) < 0.05);
    double per = secs_since(g0) / reps;

    std::printf("  %6.0f nodes: %.6fs per gradient pass\n", nodes, per);
    xs.push_back(std::log(nodes));
    ys.push_back(std::log(per));
    minX = minX == 0 ? nodes : std::min(minX, nodes);
    maxX = std::max(maxX, nodes);
  }
  if (maxX < 10 * minX) {
    std::printf("  node counts span only %.1fx (need 10x)\n", maxX / minX);
    return {false, "ladder does not span an order of magnitude"};
  }
  // Least-squares slope of log(time) over log(nodes).
  double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  bool ok = slope < 1.5;
  std::ostringstream s;
  s << "node counts " << std::fixed << std::setprecision(0) << minX << ".."
    << maxX << ", log-log slope " << std::setprecision(2) << slope
    << (ok ? " < 1.5" : " >= 1.5");
  return {ok, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..9>\n", argv[0]);
    return 2;
  }
  int n = std::atoi(argv[1]);
  Outcome (*criteria[])() = {criterion1, criterion2, criterion3,
                             criterion4, criterion5, criterion6,
                             criterion7, criterion8, criterion9};
  if (n < 1 || n > 9) {
    std::fprintf(stderr, "criterion number must be 1..9\n");
    return 2;
  }
  Outcome o;
  try {
    o = criteria[n - 1]();
  } catch (const std::exception& e) {
    o = {false, std::string("unexpected exception: ") + e.what()};
  }
  std::printf("criterion %d: %s - %s\n", n, o.pass ? "PASS" : "FAIL",
              o.summary.c_str());
  return o.pass ? 0 : 1;
}
