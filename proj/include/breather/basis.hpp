#ifndef BREATHER_BASIS_HPP
#define BREATHER_BASIS_HPP

#include "core/parallel.hpp"
#include "core/quadrature.hpp"
#include "measure.hpp"
#include "potential.hpp"
#include "transfer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace breather {

// Default half-width: eight tail periods plus the core, shifted by a quarter
// period so the Dirichlet ends do not sit on cell boundaries.
inline double default_half_width(const Potential& pot) {
  const double X = std::max(pot.left().period(), pot.right().period());
  const double core = pot.r_plus() - pot.r_minus();
  return 8.0 * X + core + 0.25 * X;
}

// Prufer angle at the right end for u(a) = 0, u'(a) = 1: u = r sin(theta),
// u'/k = r cos(theta), theta' = k inside a cell; zeros of u sit at multiples
// of pi and theta(b; lambda) increases strictly with lambda.
inline double prufer_angle(const std::vector<Segment>& segs, double lambda) {
  double th = 0, kprev = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double k = std::sqrt(lambda * segs[i].value);
    if (i > 0 && k != kprev) {
      const double n = std::floor(th / std::numbers::pi);
      const double phi = th - n * std::numbers::pi;
      th = n * std::numbers::pi + std::atan2(k * std::sin(phi), kprev * std::cos(phi));
    }
    th += k * segs[i].length();
    kprev = k;
  }
  return th;
}

// Dirichlet eigenpairs of -phi'' = lambda V phi on [-R, R], orthonormal in
// L^2_V, all eigenvalues up to lambda_max.
class SpatialBasis {
 public:
  SpatialBasis() = default;
  SpatialBasis(const Potential& pot, double R, double lambda_max) : R_(R), lambda_max_(lambda_max) {
    if (!(R > 0) || !(lambda_max > 0)) throw std::invalid_argument("SpatialBasis: R and lambda_max must be positive");
    segs_ = pot.segments(-R, R);
    starts_.reserve(segs_.size());
    for (const auto& s : segs_) starts_.push_back(s.x0);
    const double top = prufer_angle(segs_, lambda_max);
    const std::size_t M = std::size_t(std::floor(top / std::numbers::pi));
    if (M == 0) throw std::invalid_argument("SpatialBasis: no eigenvalue below lambda_max");
    lambda_.resize(M);
    state_.resize(M);
    parallel_for(M, [&](std::size_t m) {
      const double target = double(m + 1) * std::numbers::pi;
      double lo = 0, hi = lambda_max;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (prufer_angle(segs_, mid) < target ? lo : hi) = mid;
      }
      const double lam = 0.5 * (lo + hi);
      lambda_[m] = lam;
      Vec2<double> d{0.0, 1.0};
      std::vector<Vec2<double>> st;
      st.reserve(segs_.size());
      double nrm = 0;
      for (const auto& s : segs_) {
        st.push_back(d);
        const auto I = cell_integrals(lam * s.value, s.length());
        nrm += s.value * (d[0] * d[0] * I.cc + d[1] * d[1] * I.ss + 2.0 * d[0] * d[1] * I.cs);
        d = cell_propagator(s.value, s.length(), lam) * d;
      }
      const double sc = 1.0 / std::sqrt(nrm);
      for (auto& v : st) v = {v[0] * sc, v[1] * sc};
      state_[m] = std::move(st);
    });
  }

  double R() const { return R_; }
  double lambda_max() const { return lambda_max_; }
  std::size_t size() const { return lambda_.size(); }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  const std::vector<Segment>& segments() const { return segs_; }

  std::size_t locate(double x) const {
    if (x < -R_ || x > R_) throw std::out_of_range("SpatialBasis: x outside [-R, R]");
    auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
    return it == starts_.begin() ? 0 : std::size_t(it - starts_.begin()) - 1;
  }

  double operator()(std::size_t m, double x) const {
    const std::size_t i = locate(x);
    const auto& s = segs_[i];
    const auto [c, sn] = cos_sinc(lambda_[m] * s.value, x - s.x0);
    const auto& d = state_[m][i];
    return d[0] * c + d[1] * sn;
  }

  double derivative(std::size_t m, double x) const {
    const std::size_t i = locate(x);
    const auto& s = segs_[i];
    const double k2 = lambda_[m] * s.value;
    const auto [c, sn] = cos_sinc(k2, x - s.x0);
    const auto& d = state_[m][i];
    return -k2 * sn * d[0] + c * d[1];
  }

  // Rows: points, columns: modes.
  Eigen::MatrixXd matrix(const std::vector<double>& xs) const {
    Eigen::MatrixXd A(xs.size(), size());
    parallel_for(xs.size(), [&](std::size_t i) {
      for (std::size_t m = 0; m < size(); ++m) A(i, m) = (*this)(m, xs[i]);
    });
    return A;
  }

 private:
  double R_ = 0, lambda_max_ = 0;
  std::vector<Segment> segs_;
  std::vector<double> starts_;
  std::vector<double> lambda_;
  std::vector<std::vector<Vec2<double>>> state_;  // normalized (phi, phi') at segment starts
};

// Composite Gauss-Legendre nodes on [a, b], split at the given breakpoints,
// piece length at most hmax.
inline std::vector<QuadNode> composite_nodes(std::vector<std::pair<double, double>> pieces,
                                             const std::vector<double>& cuts, int order,
                                             const std::function<double(double)>& hmax) {
  std::vector<std::pair<double, double>> split;
  for (auto [a, b] : pieces) {
    std::vector<double> pts{a, b};
    for (double c : cuts)
      if (c > a && c < b) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i + 1] > pts[i]) split.emplace_back(pts[i], pts[i + 1]);
  }
  const GaussLegendre gl(order);
  std::vector<QuadNode> out;
  for (auto [a, b] : split) append_composite(out, gl, a, b, hmax(0.5 * (a + b)));
  return out;
}

}  // namespace breather

#endif
