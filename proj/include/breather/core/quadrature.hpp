#ifndef BREATHER_CORE_QUADRATURE_HPP
#define BREATHER_CORE_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace breather {

struct GaussLegendre {
  std::vector<double> x;  // nodes on (-1, 1), ascending
  std::vector<double> w;

  explicit GaussLegendre(int n) : x(n), w(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n < 1");
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[m - 1] = 0.0;
  }

  // Integrate f over [a, b].
  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    decltype(f(a)) s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += (w[i] * h) * f(c + h * x[i]);
    return s;
  }
};

struct QuadNode {
  double x;
  double w;
};

// Composite Gauss-Legendre nodes on [a, b] split into pieces of length <= hmax.
inline void append_composite(std::vector<QuadNode>& out, const GaussLegendre& gl, double a,
                             double b, double hmax) {
  if (!(b > a)) return;
  const int pieces = std::max(1, int(std::ceil((b - a) / hmax)));
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h, hi = (p + 1 == pieces) ? b : lo + h;
    const double hh = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < gl.x.size(); ++i) out.push_back({c + hh * gl.x[i], gl.w[i] * hh});
  }
}

}  // namespace breather

#endif
