#ifndef BREATHER_CORE_EXACT_HPP
#define BREATHER_CORE_EXACT_HPP

#include <boost/integer/common_factor.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace breather {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return double(r.numerator()) / double(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Real input that may carry an exact rational value.
struct ExactNumber {
  double value = 0.0;
  std::optional<Rational> exact;

  ExactNumber() = default;
  ExactNumber(int v) : value(v), exact(Rational(v)) {}
  ExactNumber(long v) : value(double(v)), exact(Rational(v)) {}
  ExactNumber(long long v) : value(double(v)), exact(Rational(std::int64_t(v))) {}
  ExactNumber(const Rational& r) : value(to_double(r)), exact(r) {}
  ExactNumber(double v) : value(v) {}

  bool is_exact() const { return exact.has_value(); }
};

inline std::optional<std::int64_t> exact_isqrt(std::int64_t n) {
  if (n < 0) return std::nullopt;
  auto r = std::int64_t(std::llround(std::sqrt(double(n))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (c * c == n) return c;
  return std::nullopt;
}

// sqrt(r) if r is the square of a rational.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
  auto n = exact_isqrt(r.numerator());
  auto d = exact_isqrt(r.denominator());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

// gcd of positive rationals: gcd(numerators)/lcm(denominators) in lowest terms.
inline Rational rational_gcd(const Rational& x, const Rational& y) {
  const std::int64_t n = boost::integer::gcd(x.numerator(), y.numerator());
  const std::int64_t d = boost::integer::lcm(x.denominator(), y.denominator());
  return Rational(n, d);
}

// Exact value of a double if it is a dyadic rational with a small denominator.
inline std::optional<Rational> dyadic_exact(double v, int max_pow2 = 20) {
  if (!std::isfinite(v)) return std::nullopt;
  double scaled = v;
  std::int64_t den = 1;
  for (int p = 0; p <= max_pow2; ++p) {
    if (scaled == std::floor(scaled) && std::abs(scaled) < 9.0e15)
      return Rational(std::int64_t(scaled), den);
    scaled *= 2.0;
    den *= 2;
  }
  return std::nullopt;
}

// Continued-fraction approximation |v - p/q| <= tol*max(1,|v|), q <= max_den.
inline std::optional<Rational> rational_approx(double v, double tol = 1e-9,
                                               std::int64_t max_den = 1000000) {
  if (!std::isfinite(v)) return std::nullopt;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    const auto ai = std::int64_t(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(v - double(h1) / double(k1)) <= tol * std::max(1.0, std::abs(v)))
      return Rational(h1, k1);
    const double frac = x - a;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

// Parses "p/q", an integer, or a decimal. Decimals are exact only when dyadic.
inline ExactNumber parse_exact(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t i1 = 0, i2 = 0;
      const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      const long long p = std::stoll(a, &i1), q = std::stoll(b, &i2);
      if (i1 != a.size() || i2 != b.size() || q == 0) throw std::invalid_argument(s);
      return ExactNumber(Rational(p, q));
    }
    std::size_t idx = 0;
    if (s.find_first_of(".eE") == std::string::npos) {
      const long long p = std::stoll(s, &idx);
      if (idx != s.size()) throw std::invalid_argument(s);
      return ExactNumber(p);
    }
    const double v = std::stod(s, &idx);
    if (idx != s.size()) throw std::invalid_argument(s);
    ExactNumber out(v);
    out.exact = dyadic_exact(v);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
}

}  // namespace breather

#endif
