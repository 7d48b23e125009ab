#pragma once
// Lower semicontinuous submeasures on subsets of the positive integers, the
// tail-limit star norm, and prefix-based estimators. Exact values are exact
// rationals; estimator output always carries the prefix it was computed at.

#include "statlim/index_sets.hpp"
#include "statlim/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace statlim {

enum class SubmeasureKind {
  density,            // phi(A) = sup_n |A ∩ [1,n]| / n, phi(N) = 1
  summable_harmonic,  // phi(A) = sum_{n in A} 1/n, phi(N) = infinity
  counting,           // phi(A) = |A|, phi(N) = infinity
};

class Submeasure {
 public:
  static Submeasure density() { return Submeasure(SubmeasureKind::density); }
  static Submeasure summable_harmonic() { return Submeasure(SubmeasureKind::summable_harmonic); }
  static Submeasure counting() { return Submeasure(SubmeasureKind::counting); }

  SubmeasureKind kind() const { return kind_; }
  bool bounded() const { return kind_ == SubmeasureKind::density; }

 private:
  explicit Submeasure(SubmeasureKind k) : kind_(k) {}
  SubmeasureKind kind_;
};

enum class EstimateMode { exact, estimated };

struct StarNormEstimate {
  Rational value;       // meaningful when !infinite
  bool infinite = false;
  uint64_t at_prefix = 0;  // 0 for exact values
  EstimateMode mode = EstimateMode::exact;
};

struct StarNormOptions {
  uint64_t prefix = 1'000'000;  // default estimation prefix for symbolic sets
};

// phi(s ∩ [1, N]) exactly. The density/summable cases walk the members of s,
// so N is capped at the enumeration bound of 10^7.
Rational phi_prefix(const Submeasure& phi, const IndexSet& s, uint64_t n);

StarNormEstimate star_norm(const Submeasure& phi, const IndexSet& s, StarNormOptions opts = {});

// True when the star norms of s and of s \ {1..n} agree: exactly for exact
// values, within 2/sqrt(N) when either side is estimated.
bool finite_invariance_check(const Submeasure& phi, const IndexSet& s, uint64_t n, uint64_t N);

// Shared estimator core for enumerated hit sets (sorted 1-based indices):
// max over n in [ceil(sqrt(N)), N] of (hits in (cut, n]) / n.
Rational upper_density_window_estimate(std::span<const uint32_t> hits, uint64_t n);

// Tail mass sum_{h in hits, h > cut} w(h) for the harmonic weights, and the
// plain tail count, both over the same sqrt-cut window.
double harmonic_tail_estimate(std::span<const uint32_t> hits, uint64_t n);
uint64_t counting_tail_estimate(std::span<const uint32_t> hits, uint64_t n);

}  // namespace statlim
