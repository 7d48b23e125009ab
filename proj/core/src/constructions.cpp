#include "statlim/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace statlim {

namespace {

nlohmann::json rset_to_meta(const RClosedSet& s) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : s.parts()) {
    parts.push_back({format_rational(p.lo), format_rational(p.hi)});
  }
  return nlohmann::json{{"parts", parts}};
}

uint64_t count_odd_nonsquares(uint64_t n) {
  uint64_t odds = (n + 1) / 2;
  uint64_t odd_squares = (isqrt_u64(n) + 1) / 2;
  return odds - odd_squares;
}

// Largest t with t! <= n (n >= 1), via the uint64 factorial ladder.
uint32_t factorial_block_of(uint64_t n) {
  uint64_t f = 1;
  uint32_t t = 1;
  while (true) {
    uint64_t next = f;
    bool overflow = false;
    uint32_t ti = t + 1;
    if (next > UINT64_MAX / ti) {
      overflow = true;
    } else {
      next *= ti;
    }
    if (overflow || next > n) return t;
    f = next;
    ++t;
  }
}

}  // namespace

IndexSet squares_part() { return IndexSet::squares(); }

IndexSet odd_nonsquares_part() {
  return IndexSet::set_diff(IndexSet::ap(1, 2), IndexSet::squares());
}

IndexSet scaled_part(uint32_t k) {
  return IndexSet::set_diff(IndexSet::scaled_odd(k), IndexSet::squares());
}

BasePartition base_partition() {
  return BasePartition{
      [](uint32_t k) {
        if (k == 0) throw precondition_error("base_partition: k is 1-based");
        return scaled_part(k);
      },
      odd_nonsquares_part(),
      squares_part(),
  };
}

uint32_t factorial_block_selector(uint64_t t) {
  if (t == 0) throw precondition_error("factorial_block_selector: t is 1-based");
  if (t % 2 == 1 || is_square_u64(t)) return 1;  // B and C blocks absorb into m = 1
  uint32_t j = valuation2(t);
  return j >= 2 ? j : 1;
}

IndexSet factorial_subpartition(uint32_t k, uint32_t m) {
  if (k == 0 || m == 0) throw precondition_error("factorial_subpartition: k, m are 1-based");
  IndexSet selector =
      m >= 2 ? scaled_part(m)
             // m = 1 absorbs the A_1, B and C blocks: everything outside the
             // deeper scaled parts, i.e. not (multiple of 4 and non-square).
             : IndexSet::set_diff(IndexSet::all(),
                                  IndexSet::set_diff(IndexSet::power_multiples(2, 2),
                                                     IndexSet::squares()));
  return IndexSet::factorial_filter(scaled_part(k), selector);
}

Rational ud_unit(uint64_t t) {
  if (t == 0) throw precondition_error("ud_unit: t is 1-based");
  // Block j holds the j values a/(j-1), a = 0..j-1; block 1 is {0}.
  uint64_t j = static_cast<uint64_t>((std::sqrt(8.0 * static_cast<double>(t) + 1.0) - 1.0) / 2.0);
  while (j * (j + 1) / 2 < t) ++j;
  while (j > 1 && (j - 1) * j / 2 >= t) --j;
  uint64_t a = t - (j - 1) * j / 2 - 1;
  if (j == 1) return 0;
  return Rational(BigInt(a), BigInt(j - 1));
}

Rational quantile_transport(const RClosedSet& F, const Rational& u) {
  if (!is_regular_closed(F)) {
    throw precondition_error("quantile_transport: F not regular closed or empty");
  }
  if (u < 0 || u > 1) throw precondition_error("quantile_transport: u outside [0,1]");
  Rational target = u * F.total_length();
  Rational cum = 0;
  for (const auto& p : F.parts()) {
    Rational len = p.length();
    if (target <= cum + len) return p.lo + (target - cum);
    cum += len;
  }
  return F.parts().back().hi;
}

Rational cantor_transport(const Rational& r) {
  if (r < 0 || r > 1) throw precondition_error("cantor_transport: r outside [0,1]");
  if (r == 1) return 1;
  // Long-divide to get the binary expansion; remainders repeat, giving the
  // preperiod and period. Digits double into base 3.
  BigInt p = numerator(r);
  BigInt q = denominator(r);
  std::vector<int> digits;
  std::map<BigInt, size_t> seen;
  BigInt rem = p;
  size_t period_start = 0;
  while (true) {
    auto it = seen.find(rem);
    if (it != seen.end()) {
      period_start = it->second;
      break;
    }
    seen[rem] = digits.size();
    rem *= 2;
    int d = 0;
    if (rem >= q) {
      d = 1;
      rem -= q;
    }
    digits.push_back(d);
  }
  size_t s = period_start;           // preperiod length
  size_t t = digits.size() - s;      // period length (>= 1)
  BigInt pre_val = 0;                // doubled digits, base 3
  for (size_t i = 0; i < s; ++i) pre_val = pre_val * 3 + 2 * digits[i];
  BigInt per_val = 0;
  for (size_t i = s; i < digits.size(); ++i) per_val = per_val * 3 + 2 * digits[i];
  BigInt pow3_s = 1;
  for (size_t i = 0; i < s; ++i) pow3_s *= 3;
  BigInt pow3_t = 1;
  for (size_t i = 0; i < t; ++i) pow3_t *= 3;
  // value = (pre_val + per_val / (3^t - 1)) / 3^s
  return (Rational(pre_val) + Rational(per_val, pow3_t - 1)) / Rational(pow3_s);
}

Rational cantor_sequence(uint64_t n) { return cantor_transport(ud_unit(n)); }

std::pair<uint64_t, uint64_t> q_enum(uint64_t t) {
  if (t == 0) throw precondition_error("q_enum: t is 1-based");
  // Block b >= 1 lists a = 0..b (b+1 entries); cumulative size b(b+3)/2.
  uint64_t b = static_cast<uint64_t>(std::sqrt(2.0 * static_cast<double>(t)));
  while (b * (b + 3) / 2 < t) ++b;
  while (b > 1 && (b - 1) * (b + 2) / 2 >= t) --b;
  uint64_t a = t - (b - 1) * (b + 2) / 2 - 1;
  return {a, b};
}

RClosedSet c_set(uint64_t m) {
  if (m == 0) throw precondition_error("c_set: m is 1-based");
  RClosedSet cur = RClosedSet::interval(0, 1);
  Rational radius = pow2(-static_cast<int>(m));
  Interval bounds(Rational(-2), Rational(2));
  for (uint64_t t = 1; t <= m; ++t) {
    auto [a, b] = q_enum(t);
    Rational qt(BigInt(a), BigInt(b));
    RClosedSet ball = RClosedSet::interval(qt - radius, qt + radius);
    cur = diff_within(cur, ball, bounds);
  }
  return cur;
}

bool union_step_identity(uint64_t m) {
  RClosedSet lhs = set_union(c_set(m), c_set(m + 1));
  // RHS: radius 2^-(m+1) holes around q_1..q_m only.
  RClosedSet rhs = RClosedSet::interval(0, 1);
  Rational radius = pow2(-static_cast<int>(m) - 1);
  Interval bounds(Rational(-2), Rational(2));
  for (uint64_t t = 1; t <= m; ++t) {
    auto [a, b] = q_enum(t);
    Rational qt(BigInt(a), BigInt(b));
    rhs = diff_within(rhs, RClosedSet::interval(qt - radius, qt + radius), bounds);
  }
  return lhs == rhs;
}

// ---------------------------------------------------------------------------
// assemble_triple

namespace {

struct TripleState {
  RFSigma A;
  RClosedSet B, C, F;
  size_t layer_count = 0;
};

void validate_triple(const TripleState& st, bool allow_empty_a) {
  if (st.B.empty()) throw precondition_error("B empty");
  if (st.C.empty()) throw precondition_error("C empty");
  for (size_t i = 0; i < st.A.layers.size(); ++i) {
    if (st.A.layers[i].empty()) {
      throw precondition_error("layer " + std::to_string(i + 1) + " of A is empty");
    }
    if (!is_subset(st.A.layers[i], st.B)) throw precondition_error("A ⊄ B");
  }
  if (!is_subset(st.B, st.C)) throw precondition_error("B ⊄ C");
  RClosedSet S = isolated_points(st.B);
  if (st.A.layers.empty()) {
    if (!allow_empty_a) throw precondition_error("A empty");
    if (!S.empty()) throw precondition_error("S ⊄ A (A is empty but B has isolated points)");
  } else {
    for (const auto& pt : S.parts()) {
      bool covered = false;
      for (const auto& layer : st.A.layers) {
        if (layer.contains(pt.lo)) {
          covered = true;
          break;
        }
      }
      if (!covered) throw precondition_error("S ⊄ A");
    }
  }
}

// Layer index for the k-th scaled part: layers 1..L-1 take their own k, the
// last layer absorbs all deeper parts.
size_t layer_for(uint32_t k, size_t layer_count) {
  return std::min<size_t>(k, layer_count);
}

}  // namespace

SeqGen assemble_triple(const RFSigma& A, const RClosedSet& B, const RClosedSet& C) {
  auto st = std::make_shared<TripleState>();
  st->A = A;
  st->B = B;
  st->C = C;
  st->layer_count = A.layers.size();
  validate_triple(*st, /*allow_empty_a=*/true);

  RClosedSet S = isolated_points(B);
  std::vector<Interval> f_parts;
  for (const auto& p : B.parts()) {
    if (!p.is_point()) f_parts.push_back(p);
  }
  st->F = RClosedSet(std::move(f_parts));
  if (st->F.empty() || !is_regular_closed(st->F)) {
    throw precondition_error("B∖S not regular closed or empty");
  }

  nlohmann::json meta{{"construction", "triple"},
                      {"layers", st->layer_count},
                      {"B", rset_to_meta(B)},
                      {"C", rset_to_meta(C)}};
  {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : A.layers) layers.push_back(rset_to_meta(layer));
    meta["A"] = {{"layers", layers}};
  }

  if (st->layer_count == 0) {
    // Empty-A variant: uniformly distributed values off the squares, dense
    // values of C on them.
    auto eval = [st](uint64_t n) -> Rational {
      uint64_t r = isqrt_u64(n);
      if (r * r == n) return dense_enum(st->C, r);
      uint64_t m = n - r;
      return quantile_transport(st->F, ud_unit(m));
    };
    return SeqGen(eval, std::move(meta));
  }

  auto eval = [st](uint64_t n) -> Rational {
    uint64_t r = isqrt_u64(n);
    if (r * r == n) {
      return dense_enum(st->C, r);  // n is the r-th square
    }
    if (n % 2 == 1) {
      uint64_t m = count_odd_nonsquares(n);
      return quantile_transport(st->F, ud_unit(m));
    }
    uint32_t k = valuation2(n);
    uint32_t m = factorial_block_selector(factorial_block_of(n));
    return dense_enum(st->A.layers[layer_for(k, st->layer_count) - 1], m);
  };
  return SeqGen(eval, std::move(meta));
}

SeqGen lambda_only(const RFSigma& B) {
  if (B.layers.empty()) throw precondition_error("lambda_only: B has no layers");
  auto st = std::make_shared<RFSigma>(B);
  for (size_t i = 0; i < st->layers.size(); ++i) {
    if (st->layers[i].empty()) {
      throw precondition_error("layer " + std::to_string(i + 1) + " of B is empty");
    }
  }
  nlohmann::json meta{{"construction", "lambda_only"}, {"layers", st->layers.size()}};
  {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : st->layers) layers.push_back(rset_to_meta(layer));
    meta["B"] = {{"layers", layers}};
  }
  size_t layer_count = st->layers.size();
  auto eval = [st, layer_count](uint64_t n) -> Rational {
    uint32_t k = 1;  // B and C channels absorb into the k = 1 family
    if (n % 2 == 0 && !is_square_u64(n)) k = valuation2(n);
    uint32_t m = factorial_block_selector(factorial_block_of(n));
    return dense_enum(st->layers[layer_for(k, layer_count) - 1], m);
  };
  return SeqGen(eval, std::move(meta));
}

SeqGen nonclosed_demo() {
  auto eval = [](uint64_t n) -> Rational {
    uint32_t i = 1;
    if (n % 2 == 0 && !is_square_u64(n)) i = valuation2(n);
    return Rational(1, BigInt(i));
  };
  return SeqGen(eval, nlohmann::json{{"construction", "nonclosed_demo"}});
}

// ---------------------------------------------------------------------------
// fsigma_pair

namespace {

constexpr uint64_t kBlockSearchBound = 10'000'000;

struct FsigmaState {
  RClosedSet B, C;
  IndexSet I;
  SubmeasureKind phi;
  // m_k thresholds, lazily extended; thresholds[k-1] = m_k, m_0 = 0.
  std::vector<uint64_t> thresholds;
  long double pending_mass = 0.0L;  // mass accumulated past the last threshold
  uint64_t scanned = 0;             // last n folded into pending_mass
  std::mutex mu;

  // Extends thresholds until m_k >= target or the bound trips.
  void extend(uint64_t target) {
    std::scoped_lock lock(mu);
    while (thresholds.empty() || thresholds.back() < target) {
      uint64_t k = thresholds.size() + 1;
      long double need = static_cast<long double>(k);
      while (pending_mass < need) {
        ++scanned;
        if (scanned > kBlockSearchBound) {
          throw precondition_error("fsigma_pair: threshold search exceeded the 10^7 bound");
        }
        if (!I.contains(scanned)) {
          pending_mass += phi == SubmeasureKind::summable_harmonic
                              ? 1.0L / static_cast<long double>(scanned)
                              : 1.0L;
        }
      }
      thresholds.push_back(scanned);
      pending_mass = 0.0L;
    }
  }

  // Index t of the block (m_{t-1}, m_t] containing n.
  uint64_t block_of(uint64_t n) {
    extend(n);
    std::scoped_lock lock(mu);
    auto it = std::lower_bound(thresholds.begin(), thresholds.end(), n);
    return static_cast<uint64_t>(it - thresholds.begin()) + 1;
  }
};

}  // namespace

SeqGen fsigma_pair(const RClosedSet& B, const RClosedSet& C, const IdealSpec& ideal,
                   const IndexSet& I) {
  if (ideal.kind() != IdealKind::fsigma) {
    throw precondition_error("fsigma_pair: ideal is not an unbounded-submeasure ideal");
  }
  if (B.empty()) throw precondition_error("B empty");
  if (!is_subset(B, C)) throw precondition_error("B ⊄ C");
  if (I.cardinality() != Card::infinite) throw precondition_error("I not infinite");
  if (is_member(ideal, I) != Tristate::yes) throw precondition_error("I not a member of the ideal");

  auto st = std::make_shared<FsigmaState>();
  st->B = B;
  st->C = C;
  st->I = I;
  st->phi = ideal.phi().kind();

  nlohmann::json meta{{"construction", "fsigma_pair"},
                      {"B", rset_to_meta(B)},
                      {"C", rset_to_meta(C)},
                      {"phi", st->phi == SubmeasureKind::summable_harmonic ? "summable-harmonic"
                                                                           : "counting"}};

  auto eval = [st](uint64_t n) -> Rational {
    if (st->I.contains(n)) {
      uint64_t k = st->I.count_u64(n);
      return dense_enum(st->C, k);
    }
    uint64_t t = st->block_of(n);
    // Column of block t: the re-ranked dyadic partition of the complement of
    // I assigns block t to the column of its rank; blocks indexed inside I
    // absorb into column 1.
    uint64_t column = 1;
    if (!st->I.contains(t)) {
      uint64_t rank = t - st->I.count_u64(t);
      column = valuation2(rank) + 1;
    }
    return dense_enum(st->B, column);
  };
  return SeqGen(eval, std::move(meta));
}

// ---------------------------------------------------------------------------
// set recursion family

RecursionFamily default_recursion_family() {
  RecursionFamily fam;
  fam.member = [](uint32_t k) { return IndexSet::power_multiples(3, k); };
  fam.phi_exact = [](uint32_t k) {
    BigInt p = 1;
    for (uint32_t i = 0; i < k; ++i) p *= 3;
    return Rational(1, p);
  };
  fam.tail_sum = [](uint32_t k) {
    // sum_{j >= k} 3^-j = 3^-k * 3/2
    BigInt p = 1;
    for (uint32_t i = 0; i < k; ++i) p *= 3;
    return Rational(3, p * 2);
  };
  return fam;
}

std::vector<IndexSet> set_recursion_partition(const RecursionFamily& family, uint32_t depth) {
  if (depth == 0) throw precondition_error("set_recursion_partition: depth must be positive");
  for (uint32_t n = 1; n <= depth; ++n) {
    auto norm = family.member(n).upper_density();
    if (!norm) {
      throw precondition_error("set_recursion_partition: M_" + std::to_string(n) +
                               " has no exact density");
    }
    Rational tail = family.tail_sum(n + 1);
    if (!(*norm > tail && tail > 0)) {
      throw precondition_error("set_recursion_partition: recursion inequality fails at n = " +
                               std::to_string(n));
    }
  }
  // Nestedness spot check.
  for (uint32_t n = 1; n < depth; ++n) {
    IndexSet outer = family.member(n);
    IndexSet inner = family.member(n + 1);
    for (uint64_t v = 1; v <= 10'000; ++v) {
      if (inner.contains(v) && !outer.contains(v)) {
        throw precondition_error("set_recursion_partition: family not nested at n = " +
                                 std::to_string(n));
      }
    }
  }
  std::vector<IndexSet> parts;
  parts.reserve(depth);
  for (uint32_t n = 1; n <= depth; ++n) {
    IndexSet prev = n == 1 ? IndexSet::all() : family.member(n - 1);
    IndexSet part = IndexSet::set_diff(prev, family.member(n));
    auto d = part.upper_density();
    if (!d || !(*d > 0)) {
      throw precondition_error("set_recursion_partition: piece " + std::to_string(n) +
                               " lacks positive exact density");
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Fin x Fin example sequence

namespace {

struct CSetCache {
  std::vector<RClosedSet> sets;  // sets[m-1] = C_m
  std::mutex mu;

  RClosedSet get(uint64_t m) {
    std::scoped_lock lock(mu);
    while (sets.size() < m) sets.push_back(c_set(sets.size() + 1));
    return sets[m - 1];
  }
};

}  // namespace

Rational nofsigma_value(uint64_t n) {
  static CSetCache cache;
  if (n == 0) throw precondition_error("nofsigma: index is 1-based");
  uint32_t m = valuation2(n) + 1;
  uint64_t j = ((n >> (m - 1)) + 1) / 2;  // rank of n in its dyadic column
  return dense_enum(cache.get(m), j);
}

SeqGen nofsigma_sequence() {
  return SeqGen([](uint64_t n) { return nofsigma_value(n); },
                nlohmann::json{{"construction", "nofsigma"}, {"columns", "dyadic"}});
}

SeqGen cantor_generator() {
  auto memo = std::make_shared<std::map<uint64_t, Rational>>();
  auto mu = std::make_shared<std::mutex>();
  auto eval = [memo, mu](uint64_t n) -> Rational {
    std::scoped_lock lock(*mu);
    auto it = memo->find(n);
    if (it != memo->end()) return it->second;
    Rational v = cantor_sequence(n);
    (*memo)[n] = v;
    return v;
  };
  return SeqGen(eval, nlohmann::json{{"construction", "cantor"}});
}

}  // namespace statlim
