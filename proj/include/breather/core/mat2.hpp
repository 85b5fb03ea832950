#ifndef BREATHER_CORE_MAT2_HPP
#define BREATHER_CORE_MAT2_HPP

#include <array>
#include <cmath>
#include <complex>

namespace breather {

using cplx = std::complex<double>;

template <class S>
using Vec2 = std::array<S, 2>;

// Row-major 2x2 matrix [[a, b], [c, d]].
template <class S>
struct Mat2 {
  S a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {S(1), S(0), S(0), S(1)}; }
  static Mat2 zero() { return {S(0), S(0), S(0), S(0)}; }

  S det() const { return a * d - b * c; }
  S trace() const { return a + d; }

  // Inverse of a unimodular matrix (adjugate).
  Mat2 inverse_unimodular() const { return {d, -b, -c, a}; }

  template <class T>
  Mat2<T> cast() const {
    return {T(a), T(b), T(c), T(d)};
  }
};

template <class S>
inline Mat2<S> operator*(const Mat2<S>& x, const Mat2<S>& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

template <class S>
inline Mat2<S> operator+(const Mat2<S>& x, const Mat2<S>& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

template <class S>
inline Mat2<S> operator-(const Mat2<S>& x, const Mat2<S>& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

template <class S>
inline Mat2<S> operator*(S s, const Mat2<S>& x) {
  return {s * x.a, s * x.b, s * x.c, s * x.d};
}

template <class S>
inline Vec2<S> operator*(const Mat2<S>& m, const Vec2<S>& v) {
  return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
}

template <class S>
inline double max_abs(const Mat2<S>& m) {
  using std::abs;
  return std::max(std::max(abs(m.a), abs(m.b)), std::max(abs(m.c), abs(m.d)));
}

template <class S>
inline double norm(const Vec2<S>& v) {
  using std::abs;
  return std::hypot(abs(v[0]), abs(v[1]));
}

template <class S>
inline S det2(const Vec2<S>& x, const Vec2<S>& y) {
  return x[0] * y[1] - x[1] * y[0];
}

// Matrix paired with its derivative in lambda.
template <class S>
struct Jet {
  Mat2<S> m = Mat2<S>::identity();
  Mat2<S> dm = Mat2<S>::zero();

  // det m = 1 for every lambda, so the inverse is the adjugate and its
  // derivative is the adjugate of dm; -inv dm inv cancels badly when |m| is large
  Jet inverse_unimodular() const { return {m.inverse_unimodular(), dm.inverse_unimodular()}; }
  S trace() const { return m.trace(); }
  S trace_prime() const { return dm.trace(); }
};

template <class S>
inline Jet<S> operator*(const Jet<S>& x, const Jet<S>& y) {
  return {x.m * y.m, x.dm * y.m + x.m * y.dm};
}

}  // namespace breather

#endif
