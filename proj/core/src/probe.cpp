#include "statlim/probe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace statlim {

namespace {

// Hit positions (1-based) with |x_n - center| <= radius.
std::vector<uint32_t> hits_within(SeqPrefix values, const Rational& center, const Rational& radius) {
  std::vector<uint32_t> out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (abs(values[i] - center) <= radius) out.push_back(static_cast<uint32_t>(i + 1));
  }
  return out;
}

// For every n, the deepest dyadic level k in [0, depth] with
// |x_n - center| <= 2^-k (level 0 means not even within 1/2).
std::vector<uint8_t> dyadic_levels(SeqPrefix values, const Rational& center, uint32_t depth) {
  std::vector<uint8_t> levels(values.size(), 0);
  std::vector<Rational> radii;
  for (uint32_t k = 1; k <= depth; ++k) radii.push_back(pow2(-static_cast<int>(k)));
  for (size_t i = 0; i < values.size(); ++i) {
    Rational d = abs(values[i] - center);
    uint8_t lv = 0;
    for (uint32_t k = 1; k <= depth; ++k) {
      if (d <= radii[k - 1]) {
        lv = static_cast<uint8_t>(k);
      } else {
        break;
      }
    }
    levels[i] = lv;
  }
  return levels;
}

Rational estimate_from_levels(const std::vector<uint8_t>& levels, uint8_t min_level, uint64_t n) {
  uint64_t cut = isqrt_u64(n);
  if (cut * cut != n) ++cut;
  uint64_t c = 0;
  uint64_t best_num = 0, best_den = 1;
  for (uint64_t v = cut + 1; v <= levels.size(); ++v) {
    if (levels[v - 1] < min_level) continue;
    ++c;
    if (static_cast<unsigned __int128>(c) * best_den > static_cast<unsigned __int128>(best_num) * v) {
      best_num = c;
      best_den = v;
    }
  }
  return Rational(BigInt(best_num), BigInt(best_den));
}

}  // namespace

UProfile u_profile(SeqPrefix values, const Rational& center, std::vector<Rational> radii,
                   const Submeasure& phi) {
  for (size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] > radii[i + 1]) || !(radii[i + 1] > 0)) {
      throw precondition_error("u_profile: radii must be strictly decreasing and positive");
    }
  }
  UProfile out;
  out.center = center;
  out.prefix = values.size();
  out.radii = std::move(radii);
  for (const auto& r : out.radii) {
    auto hits = hits_within(values, center, r);
    switch (phi.kind()) {
      case SubmeasureKind::density:
        out.estimates.push_back(upper_density_window_estimate(hits, values.size()));
        break;
      case SubmeasureKind::summable_harmonic: {
        double mass = harmonic_tail_estimate(hits, values.size());
        out.estimates.push_back(Rational(BigInt(static_cast<int64_t>(mass * 1e9)), BigInt(1'000'000'000)));
        break;
      }
      case SubmeasureKind::counting:
        out.estimates.push_back(Rational(BigInt(counting_tail_estimate(hits, values.size()))));
        break;
    }
  }
  return out;
}

std::optional<Witness> witness_analytic_p(SeqPrefix values, const Rational& center,
                                          const Submeasure& phi, const Rational& delta,
                                          WitnessOptions opts) {
  if (!phi.bounded()) {
    throw precondition_error("witness_analytic_p: requires a bounded submeasure");
  }
  if (delta <= 0) throw precondition_error("witness_analytic_p: delta must be positive");
  const uint64_t n = values.size();
  const uint32_t depth = opts.radius_depth;
  auto levels = dyadic_levels(values, center, depth);

  // Running mass estimate: the minimum of the per-radius window estimates
  // seen so far (the finite shadow of the decreasing neighbourhood limit).
  Rational u_run;
  bool u_set = false;

  std::vector<uint64_t> block_ends;
  std::vector<uint64_t> picked;  // witness positions
  uint64_t theta = 0;
  for (uint32_t k = 1; k <= depth; ++k) {
    Rational ek = estimate_from_levels(levels, static_cast<uint8_t>(k), n);
    if (!u_set || ek < u_run) {
      u_run = ek;
      u_set = true;
    }
    // Block threshold: the paper-style fraction capped at 1/2 so that block
    // lengths stay geometric at a fixed prefix.
    Rational frac = k == 1 ? Rational(0) : std::min(Rational(1) - Rational(1, BigInt(k)), Rational(1, 2));
    Rational threshold = frac * u_run;
    // Find minimal t > theta with local window ratio >= threshold.
    uint64_t c = 0;
    uint64_t t = theta;
    bool found = false;
    std::vector<uint64_t> block;
    if (threshold == 0) {
      t = theta + 1;
      if (t > n) return std::nullopt;
      if (levels[t - 1] >= k) block.push_back(t);
      found = true;
    } else {
      BigInt thr_num = numerator(threshold);
      BigInt thr_den = denominator(threshold);
      for (t = theta + 1; t <= n; ++t) {
        if (levels[t - 1] >= k) {
          ++c;
          block.push_back(t);
          // c / (t - theta) >= threshold ?
          if (BigInt(c) * thr_den >= thr_num * BigInt(t - theta)) {
            found = true;
            break;
          }
        }
      }
    }
    if (!found) return std::nullopt;  // ran out of data before covering radius k
    theta = t;
    block_ends.push_back(theta);
    picked.insert(picked.end(), block.begin(), block.end());
  }

  // Tail: beyond the last block everything still inside the deepest radius
  // belongs to the witness (the continuation of the final subsequence).
  for (uint64_t v = theta + 1; v <= n; ++v) {
    if (levels[v - 1] >= depth) picked.push_back(v);
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());

  std::vector<uint32_t> hits(picked.begin(), picked.end());
  Rational density = upper_density_window_estimate(hits, n);
  if (density < delta) return std::nullopt;

  // Independent soundness pass: every witness position beyond theta_j must
  // lie within radius 2^-j of the center, for all covered j.
  for (uint64_t v : picked) {
    Rational d = abs(values[v - 1] - center);
    for (uint32_t j = 1; j <= depth; ++j) {
      if (v > block_ends[j - 1] && d > pow2(-static_cast<int>(j))) {
        return std::nullopt;
      }
    }
  }

  Witness w;
  w.indices = IndexSet::finite_list(picked);
  w.density = density;
  w.block_ends = std::move(block_ends);
  return w;
}

std::optional<Witness> witness_fsigma(SeqPrefix values, const Rational& center,
                                      const Submeasure& phi, double target, WitnessOptions opts) {
  if (phi.bounded()) {
    throw precondition_error("witness_fsigma: requires an unbounded submeasure");
  }
  if (target <= 0) throw precondition_error("witness_fsigma: target must be positive");
  const uint64_t n = values.size();
  const uint32_t depth = opts.radius_depth;
  auto levels = dyadic_levels(values, center, depth);

  auto weight = [&](uint64_t v) {
    return phi.kind() == SubmeasureKind::summable_harmonic ? 1.0 / static_cast<double>(v) : 1.0;
  };

  std::vector<uint64_t> block_ends;
  std::vector<uint64_t> picked;
  const double per_block = target / depth;
  double total = 0.0;
  uint64_t theta = 0;
  for (uint32_t k = 1; k <= depth; ++k) {
    double mass = 0.0;
    bool found = false;
    uint64_t t;
    for (t = theta + 1; t <= n; ++t) {
      if (levels[t - 1] >= k) {
        mass += weight(t);
        picked.push_back(t);
        if (mass >= per_block) {
          found = true;
          break;
        }
      }
    }
    if (!found) return std::nullopt;
    theta = t;
    block_ends.push_back(theta);
    total += mass;
  }
  for (uint64_t v = theta + 1; v <= n; ++v) {
    if (levels[v - 1] >= depth) {
      picked.push_back(v);
      total += weight(v);
    }
  }
  if (total < target) return std::nullopt;
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());

  for (uint64_t v : picked) {
    Rational d = abs(values[v - 1] - center);
    for (uint32_t j = 1; j <= depth; ++j) {
      if (v > block_ends[j - 1] && d > pow2(-static_cast<int>(j))) return std::nullopt;
    }
  }

  Witness w;
  w.indices = IndexSet::finite_list(picked);
  w.mass = total;
  std::vector<uint32_t> hits(picked.begin(), picked.end());
  w.density = upper_density_window_estimate(hits, n);
  w.block_ends = std::move(block_ends);
  return w;
}

uint64_t SpectrumParams::ordinary_threshold(uint64_t n) {
  double bits = std::log2(static_cast<double>(std::max<uint64_t>(n, 2)));
  return static_cast<uint64_t>(std::ceil(bits / 2.0));
}

SpectrumReport spectrum(SeqPrefix values, const std::vector<Rational>& grid, const Submeasure& phi,
                        const SpectrumParams& params) {
  if (grid.empty()) throw precondition_error("spectrum: empty grid");
  if (!(params.radius > 0)) throw precondition_error("spectrum: radius must be positive");
  const uint64_t n = values.size();
  const uint64_t ord_threshold = SpectrumParams::ordinary_threshold(n);

  SpectrumReport report;
  report.radius = params.radius;
  report.delta = params.delta;
  report.prefix = n;
  report.points.reserve(grid.size());

  for (const auto& g : grid) {
    SpectrumPoint pt;
    pt.grid_point = g;
    auto hits = hits_within(values, g, params.radius);
    pt.hits_at_radius = hits.size();
    pt.ordinary = hits.size() >= ord_threshold;

    bool cluster_raw = false;
    if (phi.bounded()) {
      pt.cluster_estimate = upper_density_window_estimate(hits, n);
      cluster_raw = pt.cluster_estimate > params.delta;
    } else {
      pt.cluster_mass = phi.kind() == SubmeasureKind::summable_harmonic
                            ? harmonic_tail_estimate(hits, n)
                            : static_cast<double>(counting_tail_estimate(hits, n));
      cluster_raw =
          Rational(BigInt(static_cast<int64_t>(pt.cluster_mass * 1e9)), BigInt(1'000'000'000)) >
          params.delta;
    }

    bool witness_ok = false;
    if (phi.bounded()) {
      if (auto w = witness_analytic_p(values, g, phi, params.delta, params.witness)) {
        pt.witness_density = w->density;
        witness_ok = true;
      }
    } else {
      double target = std::max(1e-9, static_cast<double>(numerator(params.delta)) /
                                         static_cast<double>(denominator(params.delta)));
      if (auto w = witness_fsigma(values, g, phi, target, params.witness)) {
        pt.witness_density = w->density;
        pt.witness_mass = w->mass;
        witness_ok = true;
      }
    }

    // Structural flag hierarchy: limit implies cluster implies ordinary.
    bool cluster = pt.ordinary && cluster_raw;
    bool limit = cluster && witness_ok;
    pt.flag = limit      ? PointFlag::limit
              : cluster  ? PointFlag::cluster
              : pt.ordinary ? PointFlag::ordinary
                            : PointFlag::none;
    report.points.push_back(std::move(pt));
  }
  return report;
}

std::string SpectrumReport::to_csv() const {
  std::ostringstream os;
  os << "grid_point,ordinary,cluster_estimate,limit_witness_density\n";
  for (const auto& pt : points) {
    double cl = static_cast<double>(numerator(pt.cluster_estimate)) /
                static_cast<double>(denominator(pt.cluster_estimate));
    if (pt.cluster_mass != 0.0) cl = pt.cluster_mass;
    double wd = static_cast<double>(numerator(pt.witness_density)) /
                static_cast<double>(denominator(pt.witness_density));
    if (pt.witness_mass != 0.0) wd = pt.witness_mass;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.9f,%.9f\n", format_rational(pt.grid_point).c_str(),
                  pt.ordinary ? 1 : 0, cl, wd);
    os << buf;
  }
  return os.str();
}

}  // namespace statlim
