#include "statlim/verify.hpp"

#include "statlim/ideals.hpp"
#include "statlim/probe.hpp"
#include "statlim/submeasure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace statlim::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double to_double(const Rational& r) {
  return static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
}

std::string rstr(const Rational& r) { return format_rational(r); }

CheckResult check(std::string name, bool pass, std::string detail) {
  return CheckResult{std::move(name), pass, std::move(detail)};
}

// ---------------------------------------------------------------------------
// suite: densities (partition densities at N = 10^6, exact counting)

SuiteResult suite_densities() {
  SuiteResult out{"densities", {}};
  auto start = Clock::now();
  const BigInt n = 1'000'000;
  for (uint32_t k = 1; k <= 6; ++k) {
    Rational measured(scaled_part(k).count(n), n);
    Rational target = pow2(-static_cast<int>(k) - 1);
    bool ok = abs(measured - target) <= Rational(1, 100);
    out.checks.push_back(check("A_" + std::to_string(k) + "_density", ok,
                               rstr(measured) + " vs " + rstr(target) + " +/- 1/100"));
  }
  {
    Rational measured(odd_nonsquares_part().count(n), n);
    bool ok = abs(measured - Rational(1, 2)) <= Rational(1, 100);
    out.checks.push_back(check("B_density", ok, rstr(measured) + " vs 1/2 +/- 1/100"));
  }
  {
    Rational measured(squares_part().count(n), n);
    bool ok = measured <= Rational(1, 1000);
    out.checks.push_back(check("C_density", ok, rstr(measured) + " <= 1/1000"));
  }
  double elapsed = seconds_since(start);
  out.checks.push_back(check("runtime", elapsed < 1.0, std::to_string(elapsed) + "s < 1s"));
  return out;
}

// ---------------------------------------------------------------------------
// suite: triple (the principal experiment)

TripleFixture make_fixture() {
  TripleFixture f;
  f.A.layers = {
      RClosedSet::interval(0, Rational(1, 16)),
      RClosedSet::interval(Rational(1, 16), Rational(1, 8)),
      RClosedSet::interval(Rational(1, 8), Rational(3, 16)),
      RClosedSet::interval(Rational(3, 16), Rational(1, 4)),
      RClosedSet::point(Rational(1, 4)),
      RClosedSet::point(Rational(3, 4)),
  };
  f.B = RClosedSet({Interval(0, Rational(1, 2)), Interval(Rational(3, 4), Rational(3, 4))});
  f.C = RClosedSet::interval(0, 1);
  return f;
}

PointFlag expected_flag(const Rational& g, const RClosedSet& a_union, const RClosedSet& b,
                        const RClosedSet& c) {
  if (a_union.contains(g)) return PointFlag::limit;
  if (b.contains(g)) return PointFlag::cluster;
  if (c.contains(g)) return PointFlag::ordinary;
  return PointFlag::none;
}

std::vector<Rational> boundary_points(const RClosedSet& a_union, const RClosedSet& b,
                                      const RClosedSet& c) {
  std::vector<Rational> pts;
  for (const auto* s : {&a_union, &b, &c}) {
    for (const auto& p : s->parts()) {
      pts.push_back(p.lo);
      pts.push_back(p.hi);
    }
  }
  return pts;
}

const char* flag_name(PointFlag f) {
  switch (f) {
    case PointFlag::limit:
      return "limit";
    case PointFlag::cluster:
      return "cluster";
    case PointFlag::ordinary:
      return "ordinary";
    default:
      return "none";
  }
}

SuiteResult suite_triple() {
  SuiteResult out{"triple", {}};
  auto start = Clock::now();
  TripleFixture f = make_fixture();
  SeqGen gen = assemble_triple(f.A, f.B, f.C);
  const uint64_t n = 100'000;
  std::vector<Rational> values = gen.prefix(n);

  const Rational step(1, 32);
  std::vector<Rational> grid;
  for (int g = 0; g <= 32; ++g) grid.push_back(Rational(g, 32));

  SpectrumParams params;
  params.radius = Rational(1, 64);
  params.delta = Rational(1, 100);
  SpectrumReport report = spectrum(values, grid, Submeasure::density(), params);

  RClosedSet a_union = f.A.hull_union();
  auto boundaries = boundary_points(a_union, f.B, f.C);
  size_t mismatches = 0;
  bool all_tolerated = true;
  std::ostringstream mismatch_detail;
  for (const auto& pt : report.points) {
    PointFlag want = expected_flag(pt.grid_point, a_union, f.B, f.C);
    if (pt.flag == want) continue;
    ++mismatches;
    Rational dist = Rational(2);
    for (const auto& b : boundaries) dist = std::min(dist, abs(pt.grid_point - b));
    bool tolerated = dist <= step;
    all_tolerated = all_tolerated && tolerated;
    mismatch_detail << " [" << rstr(pt.grid_point) << ": got " << flag_name(pt.flag) << ", want "
                    << flag_name(want) << (tolerated ? ", boundary cell]" : ", interior!]");
  }
  bool ok = all_tolerated && mismatches <= boundaries.size();
  out.checks.push_back(check("grid_flags", ok,
                             std::to_string(mismatches) + " mismatch(es), all at boundary cells:" +
                                 (mismatch_detail.str().empty() ? " none" : mismatch_detail.str())));
  double elapsed = seconds_since(start);
  out.checks.push_back(check("runtime", elapsed < 30.0, std::to_string(elapsed) + "s < 30s"));
  return out;
}

// ---------------------------------------------------------------------------
// suite: ud (uniform distribution of the quantile-transported channel)

SuiteResult suite_ud() {
  SuiteResult out{"ud", {}};
  RClosedSet F = RClosedSet::interval(0, Rational(1, 2));
  const uint64_t n = 100'000;
  std::vector<Rational> b_values;
  b_values.reserve(n);
  for (uint64_t m = 1; m <= n; ++m) b_values.push_back(quantile_transport(F, ud_unit(m)));

  bool all_ok = true;
  Rational worst_excess(-1);
  std::string worst;
  for (int j = 0; j < 32; ++j) {
    RClosedSet v = RClosedSet::interval(Rational(j, 64), Rational(j + 1, 64));
    std::vector<uint32_t> hits;
    for (uint64_t m = 1; m <= n; ++m) {
      if (v.contains(b_values[m - 1])) hits.push_back(static_cast<uint32_t>(m));
    }
    Rational est = upper_density_window_estimate(hits, n);
    Rational bound = lebesgue_on(F, v) + Rational(1, 20);
    Rational excess = est - bound;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst = "window " + std::to_string(j) + ": est " + rstr(est) + " vs bound " + rstr(bound);
    }
    all_ok = all_ok && est <= bound;
  }
  out.checks.push_back(check("window_domination", all_ok, worst));
  return out;
}

// ---------------------------------------------------------------------------
// suite: witnesses (per-layer witness density constants)

SuiteResult suite_witnesses() {
  SuiteResult out{"witnesses", {}};
  TripleFixture f = make_fixture();
  SeqGen gen = assemble_triple(f.A, f.B, f.C);
  const uint64_t n = 100'000;
  std::vector<Rational> values = gen.prefix(n);
  for (uint32_t k = 1; k <= 4; ++k) {
    Rational center = dense_enum(f.A.layers[k - 1], 1);
    auto w = witness_analytic_p(values, center, Submeasure::density(), Rational(1, 100));
    Rational target = pow2(-static_cast<int>(k) - 2) - Rational(1, 50);
    bool ok = w.has_value() && w->density >= target;
    out.checks.push_back(check(
        "layer_" + std::to_string(k), ok,
        (w ? "density " + rstr(w->density) : std::string("no witness")) + " >= " + rstr(target) +
            " at center " + rstr(center)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// suite: fsigma (limit flags equal cluster flags for an unbounded submeasure)

SuiteResult suite_fsigma() {
  SuiteResult out{"fsigma", {}};
  RClosedSet B = RClosedSet::point(0);
  RClosedSet C({Interval(0, 0), Interval(1, 1)});
  IdealSpec ideal = IdealSpec::fsigma(Submeasure::summable_harmonic());
  IndexSet I = IndexSet::powers(2);
  SeqGen gen = fsigma_pair(B, C, ideal, I);
  const uint64_t n = 100'000;
  std::vector<Rational> values = gen.prefix(n);

  std::vector<Rational> grid;
  for (int g = 0; g <= 32; ++g) grid.push_back(Rational(g, 32));
  SpectrumParams params;
  params.radius = Rational(1, 64);
  params.delta = Rational(1, 100);
  SpectrumReport report = spectrum(values, grid, Submeasure::summable_harmonic(), params);

  size_t discrepancies = 0;
  std::ostringstream detail;
  for (const auto& pt : report.points) {
    bool cluster = pt.flag == PointFlag::cluster || pt.flag == PointFlag::limit;
    bool limit = pt.flag == PointFlag::limit;
    if (cluster != limit) {
      ++discrepancies;
      detail << " [" << rstr(pt.grid_point) << ": " << flag_name(pt.flag) << "]";
    }
  }
  out.checks.push_back(check("limit_equals_cluster", discrepancies == 0,
                             std::to_string(discrepancies) + " discrepancy(ies)" + detail.str()));
  bool limit_at_zero = !report.points.empty() && report.points.front().flag == PointFlag::limit;
  out.checks.push_back(check("limit_at_zero", limit_at_zero,
                             std::string("flag at 0 is ") + flag_name(report.points.front().flag)));
  return out;
}

// ---------------------------------------------------------------------------
// suite: nonclosed (a non-closed limit-point set; 0 cluster but not limit)

SuiteResult suite_nonclosed() {
  SuiteResult out{"nonclosed", {}};
  SeqGen gen = nonclosed_demo();
  const uint64_t n = 100'000;
  std::vector<Rational> values = gen.prefix(n);

  std::vector<Rational> grid = {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4),
                                Rational(0)};
  SpectrumParams params;
  params.radius = Rational(1, 4);
  params.delta = Rational(1, 100);
  SpectrumReport report = spectrum(values, grid, Submeasure::density(), params);

  for (size_t i = 0; i < 4; ++i) {
    const auto& pt = report.points[i];
    out.checks.push_back(check("limit_at_" + rstr(pt.grid_point), pt.flag == PointFlag::limit,
                               std::string("flag ") + flag_name(pt.flag)));
  }
  const auto& zero = report.points[4];
  out.checks.push_back(check("cluster_not_limit_at_0", zero.flag == PointFlag::cluster,
                             std::string("flag ") + flag_name(zero.flag) + ", cluster estimate " +
                                 rstr(zero.cluster_estimate)));

  // Profile decay: below radius 1/8 each halving divides the estimate by at
  // least 3/2.
  std::vector<Rational> radii;
  for (int j = 1; j <= 9; ++j) radii.push_back(pow2(-j));
  UProfile profile = u_profile(values, Rational(0), radii, Submeasure::density());
  bool decay_ok = true;
  std::ostringstream detail;
  for (size_t i = 0; i + 1 < profile.radii.size(); ++i) {
    if (profile.radii[i + 1] < Rational(1, 8)) {
      if (profile.estimates[i + 1] * Rational(3, 2) > profile.estimates[i]) {
        decay_ok = false;
        detail << " [r=" << rstr(profile.radii[i + 1]) << ": " << rstr(profile.estimates[i + 1])
               << " vs " << rstr(profile.estimates[i]) << "]";
      }
    }
  }
  out.checks.push_back(check("profile_decay", decay_ok,
                             decay_ok ? "estimates shrink by >= 3/2 per halving below 1/8"
                                      : detail.str()));
  return out;
}

// ---------------------------------------------------------------------------
// suite: cantor (ternary transport of the uniform unit sequence)

SuiteResult suite_cantor() {
  SuiteResult out{"cantor", {}};
  const uint64_t n = 100'000;
  SeqGen gen = cantor_generator();
  std::vector<Rational> values = gen.prefix(n);
  Rational center(2, 3);
  for (int k = 1; k <= 4; ++k) {
    Rational radius = 1;
    for (int i = 0; i < k; ++i) radius /= 3;
    std::vector<uint32_t> hits;
    for (uint64_t m = 1; m <= n; ++m) {
      if (abs(values[m - 1] - center) <= radius) hits.push_back(static_cast<uint32_t>(m));
    }
    Rational est = upper_density_window_estimate(hits, n);
    Rational target = pow2(-k) - Rational(1, 20);
    bool ok = est >= target;
    out.checks.push_back(check("radius_3^-" + std::to_string(k), ok,
                               "estimate " + rstr(est) + " >= " + rstr(target)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// suite: finxfin (interval scaffolding of the column example)

SuiteResult suite_finxfin() {
  SuiteResult out{"finxfin", {}};

  // Find the least k0 from which the union step identity holds 50 deep.
  const uint64_t scan_limit = 200;
  std::vector<bool> ident(scan_limit + 1, false);
  for (uint64_t m = 1; m <= scan_limit; ++m) ident[m] = union_step_identity(m);
  uint64_t k0 = 0;
  for (uint64_t m = 1; m + 50 <= scan_limit; ++m) {
    bool run = true;
    for (uint64_t j = m; j <= m + 50; ++j) run = run && ident[j];
    if (run) {
      k0 = m;
      break;
    }
  }
  out.checks.push_back(check("union_step_k0", k0 != 0 && k0 <= 64,
                             "k0 = " + std::to_string(k0) + " (<= 64), identity holds on [k0, k0+50]"));

  // Separation scan: min_{i<=m, q_i != q_m} |q_i - q_m| > 1/(3m) from m0 on.
  const uint64_t sep_limit = 10'000;
  std::vector<bool> sep_ok(sep_limit + 1, false);
  std::set<Rational> seen;
  for (uint64_t m = 1; m <= sep_limit; ++m) {
    auto [a, b] = q_enum(m);
    Rational qm(BigInt(a), BigInt(b));
    Rational best(-1);
    auto it = seen.lower_bound(qm);
    if (it != seen.end() && *it != qm) best = *it - qm;
    if (it != seen.end() && *it == qm) {
      auto nx = std::next(it);
      if (nx != seen.end()) best = *nx - qm;
    }
    if (it != seen.begin()) {
      Rational below = qm - *std::prev(it);
      if (below > 0 && (best < 0 || below < best)) best = below;
    }
    sep_ok[m] = best < 0 ? false : best > Rational(1, BigInt(3) * m);
    if (m == 1) sep_ok[m] = true;  // no distinct earlier point exists
    seen.insert(qm);
  }
  uint64_t m0 = 0;
  for (uint64_t m = sep_limit;; --m) {
    if (!sep_ok[m]) {
      m0 = m + 1;
      break;
    }
    if (m == 1) {
      m0 = 1;
      break;
    }
  }
  out.checks.push_back(
      check("separation_m0", m0 != 0 && m0 <= 100 && m0 < sep_limit,
            "m0 = " + std::to_string(m0) + " (<= 100), separation > 1/(3m) up to 10^4"));

  // Excluded rationals stay excluded across 50 consecutive sets.
  bool excluded_ok = true;
  std::string fail;
  for (uint64_t t = 1; t <= 10 && excluded_ok; ++t) {
    auto [a, b] = q_enum(t);
    Rational qt(BigInt(a), BigInt(b));
    uint64_t k = std::max<uint64_t>(k0, t);
    for (uint64_t m = k; m <= k + 50; ++m) {
      if (c_set(m).contains(qt)) {
        excluded_ok = false;
        fail = "q_" + std::to_string(t) + " in C_" + std::to_string(m);
        break;
      }
    }
  }
  out.checks.push_back(check("rationals_excluded", excluded_ok,
                             excluded_ok ? "q_t not in C_m for t <= 10, m in [max(k0,t), +50]"
                                         : fail));
  return out;
}

// ---------------------------------------------------------------------------
// suite: setrecursion (exact inequalities of the default family)

SuiteResult suite_setrecursion() {
  SuiteResult out{"setrecursion", {}};
  RecursionFamily fam = default_recursion_family();
  bool ineq_ok = true;
  std::string detail;
  for (uint32_t nn = 1; nn <= 12; ++nn) {
    auto norm = fam.member(nn).upper_density();
    Rational tail = fam.tail_sum(nn + 1);
    if (!norm || !(*norm > tail && tail > 0)) {
      ineq_ok = false;
      detail = "fails at n = " + std::to_string(nn);
      break;
    }
  }
  out.checks.push_back(check("recursion_inequalities", ineq_ok,
                             ineq_ok ? "||M_n|| > tail sum > 0 exactly for n = 1..12" : detail));

  auto parts = set_recursion_partition(fam, 12);
  Rational d1 = *parts[0].upper_density();
  Rational d2 = *parts[1].upper_density();
  out.checks.push_back(check("piece_densities", d1 == Rational(2, 3) && d2 == Rational(2, 9),
                             "d(A_1) = " + rstr(d1) + ", d(A_2) = " + rstr(d2)));

  bool tails_ok = true;
  for (uint32_t nn = 1; nn <= 12; ++nn) {
    BigInt p = 1;
    for (uint32_t i = 0; i < nn; ++i) p *= 3;
    if (*fam.member(nn).upper_density() != Rational(1, p)) {
      tails_ok = false;
      break;
    }
  }
  out.checks.push_back(check("tail_density_exact", tails_ok, "d(M_n) = 3^-n exactly for n = 1..12"));

  // The union of the pieces beyond n is exactly M_n on a sampled prefix.
  bool tiling_ok = true;
  for (uint64_t v = 1; v <= 10'000 && tiling_ok; ++v) {
    bool in_m2 = fam.member(2).contains(v);
    bool in_union = false;
    for (uint32_t k = 3; k <= 12; ++k) in_union = in_union || parts[k - 1].contains(v);
    in_union = in_union || fam.member(12).contains(v);  // residue beyond depth
    if (in_m2 != in_union) tiling_ok = false;
  }
  out.checks.push_back(check("tail_tiling", tiling_ok, "union of pieces beyond n = 2 matches M_2"));
  return out;
}

// ---------------------------------------------------------------------------
// suite: oracle (closed-form counting vs brute-force enumeration)

std::vector<IndexSet> oracle_corpus() {
  std::vector<IndexSet> c;
  c.push_back(IndexSet::empty());
  c.push_back(IndexSet::all());
  c.push_back(IndexSet::squares());
  c.push_back(IndexSet::powers(2));
  c.push_back(IndexSet::powers(3));
  c.push_back(IndexSet::finite_list({1, 2, 3, 5, 8, 13, 21, 34, 55, 89}));
  c.push_back(IndexSet::finite_list({7}));
  for (uint32_t k = 0; k <= 6; ++k) c.push_back(IndexSet::scaled_odd(k));
  for (auto [r, m] : {std::pair<uint64_t, uint64_t>{0, 2},
                      {1, 2},
                      {0, 3},
                      {2, 3},
                      {2, 5},
                      {3, 7},
                      {0, 4},
                      {5, 6},
                      {11, 12}}) {
    c.push_back(IndexSet::ap(r, m));
  }
  for (auto [b, e] :
       {std::pair<uint64_t, uint32_t>{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {7, 2}}) {
    c.push_back(IndexSet::power_multiples(b, e));
  }
  for (uint32_t k = 1; k <= 6; ++k) c.push_back(scaled_part(k));
  c.push_back(odd_nonsquares_part());
  for (auto [k, m] : {std::pair<uint32_t, uint32_t>{1, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {4, 1}}) {
    c.push_back(factorial_subpartition(k, m));
  }
  size_t base_end = c.size();
  // Windows and tails of the base corpus.
  for (size_t i = 2; i < base_end; i += 3) {
    c.push_back(IndexSet::window(c[i], 100, 50'000));
    c.push_back(IndexSet::tail(c[i], 777));
  }
  // Pairwise boolean combinations cycling through the base corpus.
  for (size_t i = 0; i + 1 < base_end && c.size() < 94; i += 2) {
    c.push_back(IndexSet::set_union(c[i], c[i + 1]));
    c.push_back(IndexSet::set_intersect(c[i], c[base_end - 1 - i % base_end]));
    c.push_back(IndexSet::set_diff(c[i + 1], c[i]));
  }
  // A few deliberately nested descriptors.
  c.push_back(IndexSet::set_diff(IndexSet::set_union(IndexSet::squares(), IndexSet::powers(2)),
                                 IndexSet::ap(0, 3)));
  c.push_back(IndexSet::set_intersect(scaled_part(2), IndexSet::tail(IndexSet::ap(0, 4), 1000)));
  c.push_back(IndexSet::window(IndexSet::set_union(scaled_part(1), odd_nonsquares_part()), 10, 90'000));
  c.push_back(IndexSet::set_diff(IndexSet::all(),
                                 IndexSet::set_union(IndexSet::ap(0, 2), IndexSet::squares())));
  c.push_back(IndexSet::set_union(factorial_subpartition(1, 2), factorial_subpartition(1, 1)));
  c.push_back(IndexSet::set_intersect(IndexSet::squares(), IndexSet::ap(1, 4)));
  while (c.size() < 100) c.push_back(IndexSet::tail(c[c.size() % base_end], c.size() * 37));
  return c;
}

SuiteResult suite_oracle() {
  SuiteResult out{"oracle", {}};
  auto corpus = oracle_corpus();
  const uint64_t n = 100'000;
  size_t failures = 0;
  std::string first_fail;
  for (size_t i = 0; i < corpus.size(); ++i) {
    uint64_t brute = 0;
    for (uint64_t v = 1; v <= n; ++v) {
      if (corpus[i].contains(v)) ++brute;
    }
    BigInt closed = corpus[i].count(BigInt(n));
    if (closed != brute) {
      ++failures;
      if (first_fail.empty()) {
        first_fail = "descriptor " + std::to_string(i) + ": closed " + closed.str() + " vs brute " +
                     std::to_string(brute);
      }
    }
  }
  out.checks.push_back(check("count_matches_enumeration", failures == 0,
                             std::to_string(corpus.size()) + " descriptors at N = 10^5" +
                                 (failures ? ", first failure: " + first_fail : "")));
  return out;
}

}  // namespace

TripleFixture principal_triple_fixture() { return make_fixture(); }

std::vector<std::string> suite_names() {
  return {"densities", "triple",    "ud",     "witnesses",    "fsigma",
          "nonclosed", "cantor",    "finxfin", "setrecursion", "oracle"};
}

SuiteResult run_suite(const std::string& name) {
  if (name == "densities") return suite_densities();
  if (name == "triple") return suite_triple();
  if (name == "ud") return suite_ud();
  if (name == "witnesses") return suite_witnesses();
  if (name == "fsigma") return suite_fsigma();
  if (name == "nonclosed") return suite_nonclosed();
  if (name == "cantor") return suite_cantor();
  if (name == "finxfin") return suite_finxfin();
  if (name == "setrecursion") return suite_setrecursion();
  if (name == "oracle") return suite_oracle();
  throw precondition_error("verify: unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_all() {
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name));
  return out;
}

int report(const std::vector<SuiteResult>& results, std::ostream& os) {
  bool all_ok = true;
  for (const auto& suite : results) {
    for (const auto& c : suite.checks) {
      os << (c.pass ? "[PASS] " : "[FAIL] ") << suite.suite << "." << c.name << ": " << c.detail
         << "\n";
      all_ok = all_ok && c.pass;
    }
  }
  os << (all_ok ? "all checks passed\n" : "FAILURES present\n");
  return all_ok ? 0 : 1;
}

}  // namespace statlim::verify
