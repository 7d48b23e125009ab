#include "statlim/submeasure.hpp"

#include <algorithm>

namespace statlim {

namespace {

constexpr uint64_t kEnumerationCap = 10'000'000;

void check_enumeration_cap(uint64_t n) {
  if (n > kEnumerationCap) {
    throw precondition_error("prefix evaluation: N exceeds the 10^7 enumeration cap");
  }
}

uint64_t sqrt_cut(uint64_t n) {
  uint64_t r = isqrt_u64(n);
  return r * r == n ? r : r + 1;  // ceil(sqrt(N))
}

}  // namespace

Rational phi_prefix(const Submeasure& phi, const IndexSet& s, uint64_t n) {
  switch (phi.kind()) {
    case SubmeasureKind::counting:
      return Rational(s.count(BigInt(n)));
    case SubmeasureKind::density: {
      check_enumeration_cap(n);
      // sup over prefixes is attained at member positions.
      uint64_t c = 0;
      uint64_t best_num = 0, best_den = 1;
      for (uint64_t v = 1; v <= n; ++v) {
        if (!s.contains(v)) continue;
        ++c;
        // c/v > best_num/best_den ?
        if (static_cast<unsigned __int128>(c) * best_den >
            static_cast<unsigned __int128>(best_num) * v) {
          best_num = c;
          best_den = v;
        }
      }
      return Rational(BigInt(best_num), BigInt(best_den));
    }
    case SubmeasureKind::summable_harmonic: {
      check_enumeration_cap(n);
      Rational sum = 0;
      for (uint64_t v = 1; v <= n; ++v) {
        if (s.contains(v)) sum += Rational(1, BigInt(v));
      }
      return sum;
    }
  }
  return 0;
}

StarNormEstimate star_norm(const Submeasure& phi, const IndexSet& s, StarNormOptions opts) {
  StarNormEstimate out;
  switch (phi.kind()) {
    case SubmeasureKind::density: {
      if (auto d = s.upper_density()) {
        out.value = *d;
        return out;
      }
      // Window estimator over exact symbolic counts.
      uint64_t n = opts.prefix;
      check_enumeration_cap(n);
      uint64_t cut = sqrt_cut(n);
      uint64_t c = 0;
      uint64_t best_num = 0, best_den = 1;
      for (uint64_t v = cut + 1; v <= n; ++v) {
        if (!s.contains(v)) continue;
        ++c;
        if (static_cast<unsigned __int128>(c) * best_den >
            static_cast<unsigned __int128>(best_num) * v) {
          best_num = c;
          best_den = v;
        }
      }
      out.value = Rational(BigInt(best_num), BigInt(best_den));
      out.at_prefix = n;
      out.mode = EstimateMode::estimated;
      return out;
    }
    case SubmeasureKind::summable_harmonic: {
      // The star norm of a summable submeasure is 0 or infinity according to
      // whether the total mass converges. The periodic decomposition decides:
      // a non-null periodic part forces divergence; a purely null descriptor
      // is contained in a union of squares/powers/finite atoms, all summable.
      if (auto d = s.upper_density()) {
        if (*d > 0) {
          out.infinite = true;
        } else {
          out.value = 0;
        }
        return out;
      }
      uint64_t n = opts.prefix;
      check_enumeration_cap(n);
      uint64_t cut = sqrt_cut(n);
      double mass = 0.0;
      for (uint64_t v = cut + 1; v <= n; ++v) {
        if (s.contains(v)) mass += 1.0 / static_cast<double>(v);
      }
      out.value = Rational(BigInt(static_cast<int64_t>(mass * 1e9)), BigInt(1'000'000'000));
      out.at_prefix = n;
      out.mode = EstimateMode::estimated;
      return out;
    }
    case SubmeasureKind::counting: {
      switch (s.cardinality()) {
        case Card::finite:
          out.value = 0;
          return out;
        case Card::infinite:
          out.infinite = true;
          return out;
        case Card::unknown: {
          uint64_t n = opts.prefix;
          uint64_t cut = sqrt_cut(n);
          out.value = Rational(s.count(BigInt(n)) - s.count(BigInt(cut)));
          out.at_prefix = n;
          out.mode = EstimateMode::estimated;
          return out;
        }
      }
    }
  }
  return out;
}

bool finite_invariance_check(const Submeasure& phi, const IndexSet& s, uint64_t n, uint64_t N) {
  StarNormOptions opts{N};
  StarNormEstimate a = star_norm(phi, s, opts);
  StarNormEstimate b = star_norm(phi, IndexSet::tail(s, n), opts);
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  if (a.mode == EstimateMode::exact && b.mode == EstimateMode::exact) return a.value == b.value;
  Rational slack = Rational(2, BigInt(isqrt_u64(N) == 0 ? 1 : isqrt_u64(N)));
  return abs(a.value - b.value) <= slack;
}

Rational upper_density_window_estimate(std::span<const uint32_t> hits, uint64_t n) {
  uint64_t cut = sqrt_cut(n);
  uint64_t c = 0;
  uint64_t best_num = 0, best_den = 1;
  for (uint32_t h : hits) {
    if (h <= cut) continue;
    if (h > n) break;
    ++c;
    if (static_cast<unsigned __int128>(c) * best_den > static_cast<unsigned __int128>(best_num) * h) {
      best_num = c;
      best_den = h;
    }
  }
  return Rational(BigInt(best_num), BigInt(best_den));
}

double harmonic_tail_estimate(std::span<const uint32_t> hits, uint64_t n) {
  uint64_t cut = sqrt_cut(n);
  double mass = 0.0;
  for (uint32_t h : hits) {
    if (h <= cut) continue;
    if (h > n) break;
    mass += 1.0 / static_cast<double>(h);
  }
  return mass;
}

uint64_t counting_tail_estimate(std::span<const uint32_t> hits, uint64_t n) {
  uint64_t cut = sqrt_cut(n);
  uint64_t c = 0;
  for (uint32_t h : hits) {
    if (h > cut && h <= n) ++c;
  }
  return c;
}

}  // namespace statlim
