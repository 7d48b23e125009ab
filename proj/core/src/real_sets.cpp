#include "statlim/real_sets.hpp"

#include <algorithm>

namespace statlim {

RClosedSet normalize(std::vector<Interval> parts) { return RClosedSet(std::move(parts)); }

RClosedSet::RClosedSet(std::vector<Interval> parts) {
  if (parts.empty()) return;
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  parts_.reserve(parts.size());
  for (auto& p : parts) {
    if (!parts_.empty() && p.lo <= parts_.back().hi) {
      if (p.hi > parts_.back().hi) parts_.back().hi = p.hi;
    } else {
      parts_.push_back(std::move(p));
    }
  }
}

RClosedSet RClosedSet::interval(const Rational& lo, const Rational& hi) {
  return RClosedSet({Interval(lo, hi)});
}

RClosedSet RClosedSet::point(const Rational& p) { return RClosedSet({Interval(p, p)}); }

bool RClosedSet::contains(const Rational& x) const {
  // parts are sorted; binary search on lo.
  size_t lo = 0, hi = parts_.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (parts_[mid].hi < x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < parts_.size() && parts_[lo].lo <= x && x <= parts_[lo].hi;
}

Rational RClosedSet::total_length() const {
  Rational sum = 0;
  for (const auto& p : parts_) sum += p.length();
  return sum;
}

RClosedSet RFSigma::hull_union() const {
  RClosedSet u;
  for (const auto& layer : layers) u = set_union(u, layer);
  return u;
}

RClosedSet set_union(const RClosedSet& a, const RClosedSet& b) {
  std::vector<Interval> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return normalize(std::move(parts));
}

RClosedSet set_intersect(const RClosedSet& a, const RClosedSet& b) {
  std::vector<Interval> out;
  size_t i = 0, j = 0;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  while (i < pa.size() && j < pb.size()) {
    Rational lo = std::max(pa[i].lo, pb[j].lo);
    Rational hi = std::min(pa[i].hi, pb[j].hi);
    if (lo <= hi) out.emplace_back(lo, hi);
    if (pa[i].hi < pb[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return normalize(std::move(out));
}

RClosedSet diff_within(const RClosedSet& a, const RClosedSet& b, const Interval& bounds) {
  for (const auto& p : a.parts()) {
    if (p.lo < bounds.lo || p.hi > bounds.hi) {
      throw precondition_error("diff_within: bounds do not contain the first operand");
    }
  }
  for (const auto& p : b.parts()) {
    if (p.lo < bounds.lo || p.hi > bounds.hi) {
      throw precondition_error("diff_within: bounds do not contain the second operand");
    }
  }
  // Remove the interior of every non-degenerate part of b; endpoints stay.
  std::vector<Interval> cur = a.parts();
  for (const auto& hole : b.parts()) {
    if (hole.is_point()) continue;
    std::vector<Interval> next;
    next.reserve(cur.size() + 1);
    for (const auto& p : cur) {
      if (p.hi < hole.lo || p.lo > hole.hi) {
        next.push_back(p);
        continue;
      }
      if (p.lo <= hole.lo) next.emplace_back(p.lo, std::min(p.hi, hole.lo));
      if (hole.hi <= p.hi) next.emplace_back(std::max(p.lo, hole.hi), p.hi);
    }
    cur = std::move(next);
  }
  return normalize(std::move(cur));
}

RClosedSet isolated_points(const RClosedSet& s) {
  std::vector<Interval> pts;
  for (const auto& p : s.parts()) {
    if (p.is_point()) pts.push_back(p);
  }
  return RClosedSet(std::move(pts));
}

bool is_regular_closed(const RClosedSet& s) {
  if (s.empty()) return false;
  for (const auto& p : s.parts()) {
    if (p.is_point()) return false;
  }
  return true;
}

bool is_subset(const RClosedSet& a, const RClosedSet& b) {
  size_t j = 0;
  const auto& pb = b.parts();
  for (const auto& p : a.parts()) {
    while (j < pb.size() && pb[j].hi < p.lo) ++j;
    if (j == pb.size() || pb[j].lo > p.lo || p.hi > pb[j].hi) return false;
  }
  return true;
}

Rational dense_enum(const RClosedSet& s, uint64_t i) {
  if (s.empty()) throw precondition_error("dense_enum: empty set");
  if (i == 0) throw precondition_error("dense_enum: index is 1-based");

  std::vector<Rational> endpoints;
  std::vector<const Interval*> wide;
  for (const auto& p : s.parts()) {
    endpoints.push_back(p.lo);
    if (!p.is_point()) {
      endpoints.push_back(p.hi);
      wide.push_back(&p);
    }
  }
  if (i <= endpoints.size()) return endpoints[i - 1];
  if (wide.empty()) {
    // Finite set of points: cycle through the endpoints.
    return endpoints[(i - 1) % endpoints.size()];
  }

  uint64_t idx = i - endpoints.size();  // 1-based into the midpoint stream
  // Depth d contributes the 2^(d-1) new dyadic midpoints per non-degenerate
  // part; stream order is depth, then part, then left-to-right offset.
  uint64_t per_part = 1;
  for (uint32_t depth = 1;; ++depth) {
    uint64_t level_total = per_part * wide.size();
    if (idx <= level_total) {
      uint64_t part_ix = (idx - 1) / per_part;
      uint64_t j = (idx - 1) % per_part + 1;  // 1..2^(d-1)
      const Interval& p = *wide[part_ix];
      Rational step = p.length() / pow2(static_cast<int>(depth));
      return p.lo + step * Rational(2 * BigInt(j) - 1);
    }
    idx -= level_total;
    per_part *= 2;
    if (depth > 63) throw precondition_error("dense_enum: index out of range");
  }
}

Rational lebesgue_on(const RClosedSet& F, const RClosedSet& V) {
  if (!is_regular_closed(F)) {
    throw precondition_error("lebesgue_on: F not regular closed or empty");
  }
  return set_intersect(F, V).total_length() / F.total_length();
}

}  // namespace statlim
