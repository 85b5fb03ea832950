#ifndef BREATHER_BOUNDS_HPP
#define BREATHER_BOUNDS_HPP

#include "core/parallel.hpp"
#include "measure.hpp"
#include "potential.hpp"
#include "transfer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace breather {

struct BoundSample {
  double lambda = 0;
  double max_ratio = 0;    // sup over initial data of |u|_inf(I) / |u|_2(J)
  double argmax_angle = 0;
  double min_ratio = 0;
  bool reverse_ok = false; // |u|_2(J) <= |I|^(1/2) |u|_inf(I) for all tested data
};

struct BoundScan {
  Interval I, J;
  std::vector<BoundSample> samples;
  double sup_ratio = 0;
  double sup_lambda = 0;
};

namespace detail {

// Data at the left end of I: (u, u') = (cos t, kappa sin t).
class BoundEvaluator {
 public:
  BoundEvaluator(const Potential& pot, Interval I, Interval J, double lambda) : lambda_(lambda) {
    const double x0 = I.lo;
    kappa_ = std::max(std::sqrt(lambda * pot(x0)), 1.0 / (I.hi - I.lo));
    Mat2<double> S = Mat2<double>::identity();
    for (const auto& s : pot.segments(I.lo, I.hi)) {
      cells_.push_back({s.x0, s.length(), s.value, S});
      S = cell_propagator(s.value, s.length(), lambda) * S;
    }
    // Gram matrix of int_J u^2 in the (cos t, kappa sin t) coordinates
    S = transfer(pot, x0, J.lo, lambda);
    for (const auto& s : pot.segments(J.lo, J.hi)) {
      const auto ci = cell_integrals(lambda * s.value, s.length());
      // u0 = S.a c + S.b d, u0' = S.c c + S.d d with (c, d) the initial data
      const double A[2][2] = {{S.a, S.b}, {S.c, S.d}};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          gram_[i][j] += A[0][i] * A[0][j] * ci.cc + A[1][i] * A[1][j] * ci.ss +
                         (A[0][i] * A[1][j] + A[1][i] * A[0][j]) * ci.cs;
      S = cell_propagator(s.value, s.length(), lambda) * S;
    }
  }

  double l2_sq(double t) const {
    const double c = std::cos(t), d = kappa_ * std::sin(t);
    return gram_[0][0] * c * c + 2.0 * gram_[0][1] * c * d + gram_[1][1] * d * d;
  }

  double sup(double t) const {
    const Vec2<double> d0{std::cos(t), kappa_ * std::sin(t)};
    double m = 0;
    for (const auto& cl : cells_) {
      const Vec2<double> d = cl.S * d0;
      const double k = std::sqrt(lambda_ * cl.value);
      const Vec2<double> e = cell_propagator(cl.value, cl.length, lambda_) * d;
      m = std::max({m, std::abs(d[0]), std::abs(e[0])});
      if (k > 0) {
        // u = amp cos(k y - phi); interior extrema at k y = phi + n pi
        const double amp = std::hypot(d[0], d[1] / k);
        if (amp <= m) continue;
        double phi = std::atan2(d[1] / k, d[0]);
        phi = std::fmod(phi, std::numbers::pi);
        if (phi < 0) phi += std::numbers::pi;
        if (phi <= k * cl.length) m = amp;
      }
    }
    return m;
  }

  double ratio(double t) const { return sup(t) / std::sqrt(l2_sq(t)); }

 private:
  struct CellData {
    double x0, length, value;
    Mat2<double> S;  // initial data -> (u, u') at the cell start
  };
  double lambda_, kappa_;
  std::vector<CellData> cells_;
  double gram_[2][2] = {{0, 0}, {0, 0}};
};

template <class F>
double golden_extremum(F&& f, double a, double b, bool maximize) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double x) { return maximize ? f(x) : -f(x); };
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = g(c), fd = g(d);
  for (int i = 0; i < 60; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = g(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace detail

inline BoundSample bound_sample(const Potential& pot, Interval I, Interval J, double lambda,
                                int n_angles = 32) {
  const detail::BoundEvaluator ev(pot, I, J, lambda);
  const double h = std::numbers::pi / n_angles;
  int imax = 0, imin = 0;
  std::vector<double> r(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    r[i] = ev.ratio(i * h);
    if (r[i] > r[imax]) imax = i;
    if (r[i] < r[imin]) imin = i;
  }
  auto f = [&](double t) { return ev.ratio(t); };
  BoundSample s;
  s.lambda = lambda;
  const double tmax = detail::golden_extremum(f, (imax - 1) * h, (imax + 1) * h, true);
  const double tmin = detail::golden_extremum(f, (imin - 1) * h, (imin + 1) * h, false);
  s.max_ratio = std::max(r[imax], f(tmax));
  s.argmax_angle = f(tmax) >= r[imax] ? std::fmod(tmax + std::numbers::pi, std::numbers::pi) : imax * h;
  s.min_ratio = std::min(r[imin], f(tmin));
  s.reverse_ok = 1.0 / s.min_ratio <= std::sqrt(I.hi - I.lo) * (1 + 1e-12);
  return s;
}

// Samples lambda_j = lambda_max (j + 1) / n for j = 0 .. n - 1.
inline BoundScan bound_scan(const Potential& pot, Interval I, Interval J, double lambda_max,
                            int n_samples, int n_angles = 32) {
  if (!(J.hi > J.lo) || !(I.hi > I.lo)) throw std::domain_error("bound_scan: degenerate interval");
  if (J.lo < I.lo || J.hi > I.hi) throw std::domain_error("bound_scan: J must lie inside I");
  if (!(lambda_max > 0) || n_samples < 1) throw std::invalid_argument("bound_scan: bad lambda range");
  BoundScan out;
  out.I = I;
  out.J = J;
  out.samples.resize(n_samples);
  parallel_for(std::size_t(n_samples), [&](std::size_t j) {
    out.samples[j] = bound_sample(pot, I, J, lambda_max * double(j + 1) / n_samples, n_angles);
  });
  for (const auto& s : out.samples)
    if (s.max_ratio > out.sup_ratio) {
      out.sup_ratio = s.max_ratio;
      out.sup_lambda = s.lambda;
    }
  return out;
}

struct Plateau {
  double last_decade_max = 0;  // over (lambda_max / 10, lambda_max]
  double mid_decade_max = 0;   // over (lambda_max / 100, lambda_max / 10]
  double ratio = 0;
};

inline Plateau plateau(const BoundScan& s) {
  Plateau p;
  if (s.samples.empty()) return p;
  const double top = s.samples.back().lambda;
  for (const auto& x : s.samples) {
    if (x.lambda > top / 10)
      p.last_decade_max = std::max(p.last_decade_max, x.max_ratio);
    else if (x.lambda > top / 100)
      p.mid_decade_max = std::max(p.mid_decade_max, x.max_ratio);
  }
  p.ratio = p.last_decade_max / p.mid_decade_max;
  return p;
}

}  // namespace breather

#endif
