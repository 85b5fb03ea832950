#ifndef BREATHER_CORE_ENTIRE_HPP
#define BREATHER_CORE_ENTIRE_HPP

#include <cmath>
#include <complex>
#include <utility>

namespace breather {

// c = cos(sqrt(z) q), s1 = sin(sqrt(z) q)/sqrt(z), s2 = z*s1 and their
// z-derivatives. All are entire in z, so no branch of sqrt is ever chosen.
template <class S>
struct CellFunctions {
  S c, s1, s2, dc, ds1, ds2;
};

namespace detail {

template <class S>
inline CellFunctions<S> cell_series(S lambda, double q) {
  const S z = lambda * (q * q);
  // sum_n (-z)^n/(2n)!, sum_n (-z)^n/(2n+1)!, sum_{n>=1} n(-1)^n z^{n-1}/(2n+1)!
  S c(0), s(0), ds(0);
  S pw(1);  // (-z)^n
  double f_even = 1.0, f_odd = 1.0;  // (2n)!, (2n+1)!
  S pw_prev(1);                      // (-z)^(n-1) with sign folded in below
  for (int n = 0; n < 14; ++n) {
    if (n > 0) {
      f_even *= (2.0 * n - 1.0) * (2.0 * n);
      f_odd *= (2.0 * n) * (2.0 * n + 1.0);
    }
    c += pw / f_even;
    s += pw / f_odd;
    if (n >= 1) ds += (double(n) * (n % 2 ? -1.0 : 1.0)) * pw_prev / f_odd;
    if (n >= 1) pw_prev *= z;
    pw *= -z;
  }
  CellFunctions<S> r;
  r.c = c;
  r.s1 = q * s;
  r.s2 = lambda * r.s1;
  r.dc = -0.5 * q * r.s1;
  r.ds1 = (q * q * q) * ds;
  r.ds2 = 0.5 * (r.s1 + q * r.c);
  return r;
}

}  // namespace detail

inline CellFunctions<double> cell_functions(double lambda, double q) {
  if (std::abs(lambda) * q * q < 1.0) return detail::cell_series(lambda, q);
  CellFunctions<double> r;
  if (lambda > 0) {
    const double k = std::sqrt(lambda);
    r.c = std::cos(k * q);
    r.s1 = std::sin(k * q) / k;
  } else {
    const double k = std::sqrt(-lambda);
    r.c = std::cosh(k * q);
    r.s1 = std::sinh(k * q) / k;
  }
  r.s2 = lambda * r.s1;
  r.dc = -0.5 * q * r.s1;
  r.ds1 = (q * r.c - r.s1) / (2.0 * lambda);
  r.ds2 = 0.5 * (r.s1 + q * r.c);
  return r;
}

inline CellFunctions<std::complex<double>> cell_functions(std::complex<double> lambda, double q) {
  using C = std::complex<double>;
  if (std::abs(lambda) * q * q < 1.0) return detail::cell_series(lambda, q);
  CellFunctions<C> r;
  const C k = std::sqrt(lambda);
  r.c = std::cos(k * q);
  r.s1 = std::sin(k * q) / k;
  r.s2 = lambda * r.s1;
  r.dc = -0.5 * q * r.s1;
  r.ds1 = (q * r.c - r.s1) / (2.0 * lambda);
  r.ds2 = 0.5 * (r.s1 + q * r.c);
  return r;
}

// cos(sqrt(lambda) q) and sin(sqrt(lambda) q)/sqrt(lambda) for real lambda.
inline std::pair<double, double> cos_sinc(double lambda, double q) {
  const double z = lambda * q * q;
  if (std::abs(z) < 1e-2) {
    // four terms suffice below |z| = 1e-2
    const double c = 1 - z / 2 * (1 - z / 12 * (1 - z / 30 * (1 - z / 56)));
    const double s = q * (1 - z / 6 * (1 - z / 20 * (1 - z / 42 * (1 - z / 72))));
    return {c, s};
  }
  if (lambda > 0) {
    const double k = std::sqrt(lambda);
    return {std::cos(k * q), std::sin(k * q) / k};
  }
  const double k = std::sqrt(-lambda);
  return {std::cosh(k * q), std::sinh(k * q) / k};
}

}  // namespace breather

#endif
