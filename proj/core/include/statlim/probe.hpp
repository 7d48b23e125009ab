#pragma once
// Empirical verification over evaluated sequence prefixes: local mass
// profiles, greedy witness-subsequence extraction, and grid spectra that
// classify points as limit / cluster / ordinary.

#include "statlim/index_sets.hpp"
#include "statlim/rational.hpp"
#include "statlim/submeasure.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace statlim {

// values[i] holds x_{i+1}; the prefix length is values.size().
using SeqPrefix = std::span<const Rational>;

struct UProfile {
  Rational center;
  std::vector<Rational> radii;      // strictly decreasing
  std::vector<Rational> estimates;  // one per radius
  uint64_t prefix = 0;
};

UProfile u_profile(SeqPrefix values, const Rational& center, std::vector<Rational> radii,
                   const Submeasure& phi);

struct Witness {
  IndexSet indices;          // finite list of witness positions
  Rational density;          // window estimator value (bounded phi)
  double mass = 0.0;         // accumulated phi-mass (unbounded phi)
  std::vector<uint64_t> block_ends;  // theta_1..theta_K
};

struct WitnessOptions {
  uint32_t radius_depth = 9;  // greedy radii 2^-1 .. 2^-depth
};

// Greedy block extraction for a bounded (density-type) submeasure. Succeeds
// only if every radius level is covered, the assembled set passes the window
// density gate (>= delta), and an independent value re-check holds.
std::optional<Witness> witness_analytic_p(SeqPrefix values, const Rational& center,
                                          const Submeasure& phi, const Rational& delta,
                                          WitnessOptions opts = {});

// Greedy blocks for an unbounded submeasure, accumulating phi-mass >= target
// with values entering successive radii.
std::optional<Witness> witness_fsigma(SeqPrefix values, const Rational& center,
                                      const Submeasure& phi, double target,
                                      WitnessOptions opts = {});

enum class PointFlag { none, ordinary, cluster, limit };

struct SpectrumPoint {
  Rational grid_point;
  bool ordinary = false;
  uint64_t hits_at_radius = 0;
  Rational cluster_estimate;   // density scale for bounded phi
  double cluster_mass = 0.0;   // mass scale for unbounded phi
  Rational witness_density;    // 0 when no witness
  double witness_mass = 0.0;
  PointFlag flag = PointFlag::none;
};

struct SpectrumReport {
  std::vector<SpectrumPoint> points;
  Rational radius;
  Rational delta;
  uint64_t prefix = 0;
  std::string to_csv() const;  // grid_point, ordinary, cluster_estimate, limit_witness_density
};

struct SpectrumParams {
  Rational radius;
  Rational delta = Rational(1, 100);
  WitnessOptions witness;
  // Occurrence threshold for the ordinary flag: ceil(log2(N) / 2) hits
  // within the radius. Slow-growing, clears the sparse dense-enumeration
  // channel (~2r*sqrt(N) hits per ball) while staying above stray noise.
  static uint64_t ordinary_threshold(uint64_t n);
};

SpectrumReport spectrum(SeqPrefix values, const std::vector<Rational>& grid,
                        const Submeasure& phi, const SpectrumParams& params);

}  // namespace statlim
