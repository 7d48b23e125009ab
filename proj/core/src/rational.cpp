#include "statlim/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>

namespace statlim {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw parse_error("rational: empty string");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt p(text.substr(0, slash));
    BigInt q(text.substr(slash + 1));
    if (q == 0) throw parse_error("rational: zero denominator in '" + text + "'");
    return Rational(p, q);
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    throw parse_error("rational: cannot parse '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  BigInt p = numerator(r);
  BigInt q = denominator(r);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

BigInt isqrt_big(const BigInt& n) {
  if (n < 0) throw precondition_error("isqrt: negative argument");
  return boost::multiprecision::sqrt(n);
}

BigInt factorial_big(uint32_t n) {
  if (n > 4096) throw precondition_error("factorial: argument too large");
  BigInt f = 1;
  for (uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational pow2(int k) {
  BigInt one = 1;
  if (k >= 0) return Rational(one << k);
  return Rational(one, one << (-k));
}

uint64_t checked_pow_u64(uint64_t base, uint32_t exp) {
  const uint64_t limit = uint64_t(1) << 62;
  uint64_t r = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) {
      throw precondition_error("power: value exceeds 2^62");
    }
    r *= base;
  }
  return r;
}

}  // namespace statlim
