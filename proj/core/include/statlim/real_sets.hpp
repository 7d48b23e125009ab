#pragma once
// Closed subsets of the real line represented as finite unions of disjoint
// closed rational intervals. Degenerate intervals encode single points.
// The normalized form (sorted, disjoint, non-adjacent) is unique, so set
// equality is representation equality.

#include "statlim/rational.hpp"

#include <cstdint>
#include <vector>

namespace statlim {

struct Interval {
  Rational lo;
  Rational hi;

  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw precondition_error("interval: lo > hi");
  }
  bool is_point() const { return lo == hi; }
  Rational length() const { return hi - lo; }
};

class RClosedSet {
 public:
  RClosedSet() = default;  // the empty set
  explicit RClosedSet(std::vector<Interval> parts);

  static RClosedSet interval(const Rational& lo, const Rational& hi);
  static RClosedSet point(const Rational& p);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(const Rational& x) const;
  Rational total_length() const;

  bool operator==(const RClosedSet& other) const = default;

 private:
  std::vector<Interval> parts_;  // normalized
};

// An F_sigma set as an explicit finite list of closed layers whose union it
// is. Layers may overlap; each must be non-empty.
struct RFSigma {
  std::vector<RClosedSet> layers;

  bool empty() const { return layers.empty(); }
  RClosedSet hull_union() const;
};

// Unique normalized union of the given intervals (adjacent parts merge).
RClosedSet normalize(std::vector<Interval> parts);

RClosedSet set_union(const RClosedSet& a, const RClosedSet& b);
RClosedSet set_intersect(const RClosedSet& a, const RClosedSet& b);

// Closure-of-difference semantics: subtracts the interior of `b` from `a`,
// retaining endpoints, as needed for complements of open balls. `bounds`
// must contain both operands.
RClosedSet diff_within(const RClosedSet& a, const RClosedSet& b, const Interval& bounds);

// For this descriptor class the isolated points are exactly the point-parts.
RClosedSet isolated_points(const RClosedSet& s);

// True iff s is non-empty and has no point-parts (s = closure of interior).
bool is_regular_closed(const RClosedSet& s);

bool is_subset(const RClosedSet& a, const RClosedSet& b);

// Deterministic enumeration with dense image: all interval endpoints in
// order, then dyadic subdivision midpoints breadth-first across parts.
// When s consists of points only, the enumeration cycles. i is 1-based.
Rational dense_enum(const RClosedSet& s, uint64_t i);

// Normalized length measure of V restricted to F: length(V ∩ F)/length(F).
// F must be regular closed (hence non-empty with positive length).
Rational lebesgue_on(const RClosedSet& F, const RClosedSet& V);

}  // namespace statlim
