#include "statlim/index_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace statlim {

using Kind = IndexSetKind;

namespace {

using Node = IndexSet::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

constexpr uint64_t kFiniteListCap = 10'000'000;
constexpr uint64_t kResidueModulusCap = uint64_t(1) << 21;
constexpr uint64_t kPeriodicModulusCap = uint64_t(1) << 21;
constexpr size_t kPeriodicResidueCap = size_t(1) << 21;

// ---------------------------------------------------------------------------
// membership

uint64_t factorial_u64_or_max(uint32_t t) {
  // Smallest t with t! > 2^64 is 21.
  uint64_t f = 1;
  for (uint32_t i = 2; i <= t; ++i) {
    if (f > UINT64_MAX / i) return UINT64_MAX;
    f *= i;
  }
  return f;
}

bool node_contains(const Node& n, uint64_t v) {
  if (v == 0) return false;
  switch (n.kind) {
    case Kind::empty:
      return false;
    case Kind::all:
      return true;
    case Kind::finite_list:
      return std::binary_search(n.elems.begin(), n.elems.end(), v);
    case Kind::ap:
      return v % n.b == n.a;
    case Kind::scaled_odd:
      return n.a < 64 && (v >> n.a) != 0 && ((v >> n.a) & 1) == 1 && (v & ((uint64_t(1) << n.a) - 1)) == 0;
    case Kind::squares:
      return is_square_u64(v);
    case Kind::power_multiples:
      return v % n.a == 0;  // a holds b^e, precomputed
    case Kind::powers: {
      uint64_t p = n.a;
      while (p < v) {
        if (p > UINT64_MAX / n.a) return false;
        p *= n.a;
      }
      return p == v;
    }
    case Kind::window:
      return v > n.a && v <= n.b && node_contains(*n.x, v);
    case Kind::tail:
      return v > n.a && node_contains(*n.x, v);
    case Kind::factorial_filter: {
      uint32_t t = 1;
      while (factorial_u64_or_max(t + 1) <= v) ++t;
      return node_contains(*n.y, t) && node_contains(*n.x, v);
    }
    case Kind::union_:
      return node_contains(*n.x, v) || node_contains(*n.y, v);
    case Kind::intersect:
      return node_contains(*n.x, v) && node_contains(*n.y, v);
    case Kind::diff:
      return node_contains(*n.x, v) && !node_contains(*n.y, v);
  }
  return false;
}

// ---------------------------------------------------------------------------
// exact counting over (lo, hi]
//
// The tree is flattened into a conjunction of signed literals; composite
// positives decompose by inclusion-exclusion, negatives by complementation.
// The base case is a CRT-merged arithmetic progression optionally intersected
// with the squares, both with closed-form counts.

struct Lit {
  const Node* node;
  bool pos;
};

BigInt count_lits(std::vector<Lit> lits, BigInt lo, BigInt hi);

BigInt count_ap_range(const BigInt& r0, const BigInt& m, const BigInt& n) {
  // |{v >= 1 : v ≡ r0 (mod m), v <= n}| with 0 <= r0 < m.
  if (n <= 0) return 0;
  if (r0 == 0) return n / m;
  if (r0 > n) return 0;
  return (n - r0) / m + 1;
}

// Extended gcd on BigInt.
BigInt egcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  BigInt x1, y1;
  BigInt g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Merge v ≡ r1 (mod m1) with v ≡ r2 (mod m2); false when incompatible.
bool crt_merge(BigInt& r1, BigInt& m1, const BigInt& r2, const BigInt& m2) {
  BigInt p, q;
  BigInt g = egcd(m1, m2, p, q);
  if ((r2 - r1) % g != 0) return false;
  BigInt lcm = m1 / g * m2;
  BigInt step = (r2 - r1) / g % (m2 / g) * p % (m2 / g);
  BigInt r = r1 + m1 * step;
  r %= lcm;
  if (r < 0) r += lcm;
  r1 = r;
  m1 = lcm;
  return true;
}

BigInt count_squares_in_ap(const BigInt& r, const BigInt& m, const BigInt& lo, const BigInt& hi) {
  // |{v in (lo,hi] : v ≡ r (mod m), v a positive square}|
  if (m > kResidueModulusCap) {
    throw precondition_error("count: residue modulus too large for square counting");
  }
  uint64_t mm = static_cast<uint64_t>(m);
  uint64_t rr = static_cast<uint64_t>(r % m);
  BigInt jlo = isqrt_big(std::max(BigInt(0), lo));  // j > jlo
  BigInt jhi = isqrt_big(std::max(BigInt(0), hi));  // j <= jhi
  BigInt total = 0;
  for (uint64_t rho = 0; rho < mm; ++rho) {
    if ((rho * rho) % mm == rr % mm) {
      total += count_ap_range(BigInt(rho), BigInt(mm), jhi) - count_ap_range(BigInt(rho), BigInt(mm), jlo);
    }
  }
  return total;
}

BigInt count_base(const std::optional<std::pair<BigInt, BigInt>>& ap, bool squares, const BigInt& lo,
                  const BigInt& hi) {
  if (hi <= lo) return 0;
  if (!ap && !squares) return hi - std::max(BigInt(0), lo);
  if (!squares) {
    return count_ap_range(ap->first, ap->second, hi) - count_ap_range(ap->first, ap->second, lo);
  }
  if (!ap) return isqrt_big(hi) - isqrt_big(std::max(BigInt(0), lo));
  return count_squares_in_ap(ap->first, ap->second, lo, hi);
}

std::optional<std::pair<BigInt, BigInt>> as_ap(const Node& n) {
  switch (n.kind) {
    case Kind::ap:
      return std::make_pair(BigInt(n.a), BigInt(n.b));
    case Kind::scaled_odd:
      return std::make_pair(BigInt(1) << n.a, BigInt(1) << (n.a + 1));
    case Kind::power_multiples:
      return std::make_pair(BigInt(0), BigInt(n.a));
    default:
      return std::nullopt;
  }
}

BigInt count_with_elements(const std::vector<uint64_t>& elems, std::vector<Lit> rest, const BigInt& lo,
                           const BigInt& hi) {
  BigInt total = 0;
  for (uint64_t e : elems) {
    if (BigInt(e) <= lo) continue;
    if (BigInt(e) > hi) break;
    bool ok = true;
    for (const auto& lit : rest) {
      if (node_contains(*lit.node, e) != lit.pos) {
        ok = false;
        break;
      }
    }
    if (ok) ++total;
  }
  return total;
}

BigInt count_lits(std::vector<Lit> lits, BigInt lo, BigInt hi) {
  if (lo < 0) lo = 0;
  if (hi <= lo) return 0;

  // Trivial literals and composite decomposition.
  for (size_t i = 0; i < lits.size(); ++i) {
    const Node* n = lits[i].node;
    bool pos = lits[i].pos;
    auto rest = [&]() {
      std::vector<Lit> r = lits;
      r.erase(r.begin() + static_cast<long>(i));
      return r;
    };
    if (n->kind == Kind::empty) {
      if (pos) return 0;
      lits = rest();
      return count_lits(std::move(lits), lo, hi);
    }
    if (n->kind == Kind::all) {
      if (!pos) return 0;
      lits = rest();
      return count_lits(std::move(lits), lo, hi);
    }
    if (!pos) continue;  // negatives handled after positives decompose
    switch (n->kind) {
      case Kind::union_: {
        auto r = rest();
        auto ra = r, rb = r, rab = r;
        ra.push_back({n->x.get(), true});
        rb.push_back({n->y.get(), true});
        rab.push_back({n->x.get(), true});
        rab.push_back({n->y.get(), true});
        return count_lits(std::move(ra), lo, hi) + count_lits(std::move(rb), lo, hi) -
               count_lits(std::move(rab), lo, hi);
      }
      case Kind::intersect: {
        auto r = rest();
        r.push_back({n->x.get(), true});
        r.push_back({n->y.get(), true});
        return count_lits(std::move(r), lo, hi);
      }
      case Kind::diff: {
        auto r = rest();
        r.push_back({n->x.get(), true});
        r.push_back({n->y.get(), false});
        return count_lits(std::move(r), lo, hi);
      }
      case Kind::window: {
        auto r = rest();
        r.push_back({n->x.get(), true});
        return count_lits(std::move(r), std::max(lo, BigInt(n->a)), std::min(hi, BigInt(n->b)));
      }
      case Kind::tail: {
        auto r = rest();
        r.push_back({n->x.get(), true});
        return count_lits(std::move(r), std::max(lo, BigInt(n->a)), hi);
      }
      default:
        break;
    }
  }

  // Eliminate negatives: count(rest) - count(rest + positive literal).
  for (size_t i = 0; i < lits.size(); ++i) {
    if (lits[i].pos) continue;
    const Node* n = lits[i].node;
    if (n->kind == Kind::ap || n->kind == Kind::scaled_odd || n->kind == Kind::power_multiples ||
        n->kind == Kind::squares) {
      continue;  // cheap atomic negatives resolve in the base case
    }
    std::vector<Lit> without = lits;
    without.erase(without.begin() + static_cast<long>(i));
    std::vector<Lit> with = without;
    with.push_back({n, true});
    return count_lits(std::move(without), lo, hi) - count_lits(std::move(with), lo, hi);
  }

  // Positive atoms with enumerable support take over the iteration.
  for (size_t i = 0; i < lits.size(); ++i) {
    if (!lits[i].pos) continue;
    const Node* n = lits[i].node;
    if (n->kind == Kind::finite_list) {
      std::vector<Lit> rest = lits;
      rest.erase(rest.begin() + static_cast<long>(i));
      return count_with_elements(n->elems, std::move(rest), lo, hi);
    }
  }
  for (size_t i = 0; i < lits.size(); ++i) {
    if (!lits[i].pos) continue;
    const Node* n = lits[i].node;
    if (n->kind == Kind::powers) {
      std::vector<uint64_t> elems;
      BigInt p = n->a;
      while (p <= hi && elems.size() < 4096) {
        if (p > lo && p <= BigInt(UINT64_MAX)) elems.push_back(static_cast<uint64_t>(p));
        p *= n->a;
      }
      std::vector<Lit> rest = lits;
      rest.erase(rest.begin() + static_cast<long>(i));
      return count_with_elements(elems, std::move(rest), lo, hi);
    }
  }
  for (size_t i = 0; i < lits.size(); ++i) {
    if (!lits[i].pos) continue;
    const Node* n = lits[i].node;
    if (n->kind != Kind::factorial_filter) continue;
    std::vector<Lit> rest = lits;
    rest.erase(rest.begin() + static_cast<long>(i));
    rest.push_back({n->x.get(), true});
    BigInt total = 0;
    BigInt fact_t = 1;  // 1!
    for (uint32_t t = 1; t <= 4096 && fact_t <= hi; ++t) {
      BigInt fact_next = fact_t * (t + 1);
      if (node_contains(*n->y, t)) {
        total += count_lits(rest, std::max(lo, fact_t - 1), std::min(hi, fact_next - 1));
      }
      fact_t = fact_next;
    }
    return total;
  }

  // Base: CRT-merged APs, optional squares constraint, atomic negatives by
  // inclusion-exclusion through the same path.
  std::optional<std::pair<BigInt, BigInt>> ap;
  bool squares_pos = false;
  std::vector<const Node*> neg_atoms;
  bool squares_neg = false;
  for (const auto& lit : lits) {
    if (lit.pos) {
      if (lit.node->kind == Kind::squares) {
        squares_pos = true;
        continue;
      }
      auto a = as_ap(*lit.node);
      if (!a) throw precondition_error("count: unsupported literal combination");
      if (!ap) {
        ap = a;
      } else if (!crt_merge(ap->first, ap->second, a->first, a->second)) {
        return 0;
      }
    } else {
      if (lit.node->kind == Kind::squares) {
        squares_neg = true;
      } else {
        neg_atoms.push_back(lit.node);
      }
    }
  }
  // Resolve one negative atom at a time.
  if (!neg_atoms.empty()) {
    std::vector<Lit> base;
    for (const auto& lit : lits) {
      if (!lit.pos && lit.node == neg_atoms[0]) continue;
      base.push_back(lit);
    }
    std::vector<Lit> with = base;
    with.push_back({neg_atoms[0], true});
    return count_lits(std::move(base), lo, hi) - count_lits(std::move(with), lo, hi);
  }
  if (squares_neg) {
    BigInt no_sq = count_base(ap, false, lo, hi);
    BigInt with_sq = count_base(ap, true, lo, hi);
    if (squares_pos) return 0;  // squares ∧ ¬squares
    return no_sq - with_sq;
  }
  return count_base(ap, squares_pos, lo, hi);
}

// ---------------------------------------------------------------------------
// eventually-periodic decomposition for exact densities
//
// A descriptor decomposes as (periodic residue set mod M) Δ (null set drawn
// from squares/finite/powers/window atoms). Density is |residues| / M.

struct Periodic {
  uint64_t modulus = 1;
  std::vector<uint64_t> residues;  // sorted, unique, in [0, modulus)
  bool perturbed = false;          // true when a null symmetric difference exists
};

std::optional<Periodic> expand_to(const Periodic& p, uint64_t m) {
  if (m % p.modulus != 0) return std::nullopt;
  uint64_t k = m / p.modulus;
  if (p.residues.size() * k > kPeriodicResidueCap) return std::nullopt;
  Periodic out;
  out.modulus = m;
  out.perturbed = p.perturbed;
  out.residues.reserve(p.residues.size() * k);
  for (uint64_t j = 0; j < k; ++j) {
    for (uint64_t r : p.residues) out.residues.push_back(r + j * p.modulus);
  }
  std::sort(out.residues.begin(), out.residues.end());
  return out;
}

uint64_t lcm_capped(uint64_t a, uint64_t b) {
  uint64_t g = std::gcd(a, b);
  uint64_t q = a / g;
  if (q > kPeriodicModulusCap / b) return 0;
  return q * b;
}

std::optional<Periodic> decompose(const Node& n);

std::optional<Periodic> combine(const Node& n, Kind op) {
  auto pa = decompose(*n.x);
  auto pb = decompose(*n.y);
  if (!pa || !pb) return std::nullopt;
  uint64_t m = lcm_capped(pa->modulus, pb->modulus);
  if (m == 0) return std::nullopt;
  auto ea = expand_to(*pa, m);
  auto eb = expand_to(*pb, m);
  if (!ea || !eb) return std::nullopt;
  Periodic out;
  out.modulus = m;
  out.perturbed = ea->perturbed || eb->perturbed;
  if (op == Kind::union_) {
    std::set_union(ea->residues.begin(), ea->residues.end(), eb->residues.begin(), eb->residues.end(),
                   std::back_inserter(out.residues));
  } else if (op == Kind::intersect) {
    std::set_intersection(ea->residues.begin(), ea->residues.end(), eb->residues.begin(),
                          eb->residues.end(), std::back_inserter(out.residues));
  } else {
    std::set_difference(ea->residues.begin(), ea->residues.end(), eb->residues.begin(),
                        eb->residues.end(), std::back_inserter(out.residues));
  }
  return out;
}

std::optional<Periodic> decompose(const Node& n) {
  Periodic p;
  switch (n.kind) {
    case Kind::empty:
      return p;
    case Kind::all:
      p.residues = {0};
      return p;
    case Kind::finite_list:
    case Kind::squares:
    case Kind::powers:
    case Kind::window:
      p.perturbed = true;
      return p;
    case Kind::ap:
      if (n.b > kPeriodicModulusCap) return std::nullopt;
      p.modulus = n.b;
      p.residues = {n.a};
      return p;
    case Kind::scaled_odd: {
      if (n.a + 1 > 62 || (uint64_t(1) << (n.a + 1)) > kPeriodicModulusCap) return std::nullopt;
      p.modulus = uint64_t(1) << (n.a + 1);
      p.residues = {uint64_t(1) << n.a};
      return p;
    }
    case Kind::power_multiples:
      if (n.a > kPeriodicModulusCap) return std::nullopt;
      p.modulus = n.a;
      p.residues = {0};
      return p;
    case Kind::tail: {
      auto inner = decompose(*n.x);
      if (!inner) return std::nullopt;
      inner->perturbed = true;
      return inner;
    }
    case Kind::factorial_filter:
      return std::nullopt;
    case Kind::union_:
    case Kind::intersect:
    case Kind::diff:
      return combine(n, n.kind);
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface

IndexSet IndexSet::empty() { return IndexSet(make(Kind::empty)); }

IndexSet IndexSet::all() { return IndexSet(make(Kind::all)); }

IndexSet IndexSet::finite_list(std::vector<uint64_t> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!elems.empty() && elems.front() == 0) {
    throw precondition_error("finite_list: elements must be positive");
  }
  if (elems.size() > kFiniteListCap) {
    throw precondition_error("finite_list: exceeds the 10^7 element cap");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::finite_list;
  n->elems = std::move(elems);
  return IndexSet(std::move(n));
}

IndexSet IndexSet::ap(uint64_t r, uint64_t m) {
  if (m == 0) throw precondition_error("ap: modulus must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ap;
  n->a = r % m;
  n->b = m;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::scaled_odd(uint32_t k) {
  if (k > 62) throw precondition_error("scaled_odd: k too large");
  auto n = std::make_shared<Node>();
  n->kind = Kind::scaled_odd;
  n->a = k;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::squares() { return IndexSet(make(Kind::squares)); }

IndexSet IndexSet::power_multiples(uint64_t b, uint32_t e) {
  if (b < 2) throw precondition_error("power_multiples: base must be >= 2");
  auto n = std::make_shared<Node>();
  n->kind = Kind::power_multiples;
  n->a = checked_pow_u64(b, e);  // store b^e
  n->b = e;
  n->elems = {b};  // keep the base for serialization
  return IndexSet(std::move(n));
}

IndexSet IndexSet::powers(uint64_t b) {
  if (b < 2) throw precondition_error("powers: base must be >= 2");
  auto n = std::make_shared<Node>();
  n->kind = Kind::powers;
  n->a = b;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::window(IndexSet inner, uint64_t a, uint64_t b) {
  if (a > b) throw precondition_error("window: requires a <= b");
  auto n = std::make_shared<Node>();
  n->kind = Kind::window;
  n->a = a;
  n->b = b;
  n->x = inner.node_;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::tail(IndexSet inner, uint64_t cutoff) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::tail;
  n->a = cutoff;
  n->x = inner.node_;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::factorial_filter(IndexSet inner, IndexSet selector) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::factorial_filter;
  n->x = inner.node_;
  n->y = selector.node_;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::set_union(IndexSet a, IndexSet b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::union_;
  n->x = a.node_;
  n->y = b.node_;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::set_intersect(IndexSet a, IndexSet b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::intersect;
  n->x = a.node_;
  n->y = b.node_;
  return IndexSet(std::move(n));
}

IndexSet IndexSet::set_diff(IndexSet a, IndexSet b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::diff;
  n->x = a.node_;
  n->y = b.node_;
  return IndexSet(std::move(n));
}

bool IndexSet::contains(uint64_t n) const { return node_contains(*node_, n); }

BigInt IndexSet::count(const BigInt& n) const {
  if (n <= 0) return 0;
  return count_lits({Lit{node_.get(), true}}, 0, n);
}

uint64_t IndexSet::count_u64(uint64_t n) const {
  return static_cast<uint64_t>(count(BigInt(n)));
}

BigInt IndexSet::rank_enum(uint64_t m) const {
  if (m == 0) throw precondition_error("rank_enum: rank is 1-based");
  Card card = cardinality();
  if (card == Card::finite) {
    // Locate an upper bound; finite variants are all enumerable quickly.
    BigInt hi = 1024;
    BigInt total;
    for (int i = 0; i < 200; ++i) {
      total = count(hi);
      if (count(hi * 2) == total) break;  // saturated
      hi *= 2;
    }
    if (BigInt(m) > count(hi * 2)) {
      throw precondition_error("rank_enum: rank exceeds the size of a finite set");
    }
  }
  BigInt lo = 0, hi = 1024;
  int guard = 0;
  while (count(hi) < m) {
    hi *= 16;
    if (++guard > 96) throw precondition_error("rank_enum: element not found within search bound");
  }
  while (lo + 1 < hi) {
    BigInt mid = (lo + hi) / 2;
    if (count(mid) >= m) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<Rational> IndexSet::upper_density() const {
  auto p = decompose(*node_);
  if (!p) return std::nullopt;
  return Rational(BigInt(p->residues.size()), BigInt(p->modulus));
}

Card IndexSet::cardinality() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::empty:
    case Kind::finite_list:
    case Kind::window:
      return Card::finite;
    case Kind::all:
    case Kind::ap:
    case Kind::scaled_odd:
    case Kind::squares:
    case Kind::power_multiples:
    case Kind::powers:
      return Card::infinite;
    case Kind::tail:
      return IndexSet(n.x).cardinality();
    case Kind::union_: {
      Card a = IndexSet(n.x).cardinality();
      Card b = IndexSet(n.y).cardinality();
      if (a == Card::infinite || b == Card::infinite) return Card::infinite;
      if (a == Card::finite && b == Card::finite) return Card::finite;
      return Card::unknown;
    }
    case Kind::intersect: {
      Card a = IndexSet(n.x).cardinality();
      Card b = IndexSet(n.y).cardinality();
      if (a == Card::finite || b == Card::finite) return Card::finite;
      auto d = upper_density();
      if (d && *d > 0) return Card::infinite;
      return Card::unknown;
    }
    case Kind::diff: {
      Card a = IndexSet(n.x).cardinality();
      Card b = IndexSet(n.y).cardinality();
      if (a == Card::finite) return Card::finite;
      auto d = upper_density();
      if (d && *d > 0) return Card::infinite;
      if (a == Card::infinite && b == Card::finite) return Card::infinite;
      return Card::unknown;
    }
    case Kind::factorial_filter: {
      Card sel = IndexSet(n.y).cardinality();
      if (sel == Card::finite) return Card::finite;
      if (sel == Card::infinite) {
        auto d = IndexSet(n.x).upper_density();
        if (d && *d > 0) return Card::infinite;
      }
      return Card::unknown;
    }
  }
  return Card::unknown;
}

}  // namespace statlim
