#pragma once
// Exact rational scalars and small integer helpers shared across the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace statlim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised when a documented operation precondition fails; the message names
// the failing check so callers (and the CLI) can surface it verbatim.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed descriptor files / value streams.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// Parses "p/q" or "p" with optional leading sign. Denominator must be nonzero.
Rational parse_rational(const std::string& text);

// Canonical form: "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rational& r);

Rational abs(const Rational& r);

inline uint32_t valuation2(uint64_t n) {
  if (n == 0) throw precondition_error("valuation2: n must be positive");
  return static_cast<uint32_t>(std::countr_zero(n));
}

uint64_t isqrt_u64(uint64_t n);
BigInt isqrt_big(const BigInt& n);

inline bool is_square_u64(uint64_t n) {
  uint64_t r = isqrt_u64(n);
  return r * r == n;
}

// n! as a big integer; n is capped to keep runaway loops impossible.
BigInt factorial_big(uint32_t n);

// 2^k as Rational, k may be negative.
Rational pow2(int k);

// b^e with overflow check against 2^62; used for modulus-sized quantities.
uint64_t checked_pow_u64(uint64_t base, uint32_t exp);

}  // namespace statlim
