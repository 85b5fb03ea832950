#include "common.hpp"

#include <boost/math/quadrature/gauss.hpp>

using namespace breather;
using namespace testing_util;

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

NonlinearityProfile two_bumps() {
  return NonlinearityProfile(GammaMode::compact, std::nullopt, {}, {Bump{-0.5, 0.5, 1.0}, Bump{1.5, 0.5, 1.0}});
}

BreatherProblem small_problem(double p = 3.0, int K = 3, GridOptions grid = {}) {
  const Potential V = two_step();
  const double lmax = std::pow((K + 2) * kOmega, 2);
  auto basis = std::make_shared<const SpatialBasis>(V, 6.5, lmax);
  return BreatherProblem(basis, V, two_bumps(), p, kOmega, mode_set(K), grid);
}

Eigen::MatrixXcd random_field(const BreatherProblem& P, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd c = P.zero();
  for (Eigen::Index m = 0; m < c.rows(); ++m)
    for (Eigen::Index k = 0; k < c.cols(); ++k) c(m, k) = scale * cplx(n(rng), n(rng)) / (1.0 + m);
  return c;
}

// int Gamma |u|^{p+1} dx dt / T from basis evaluation, Gauss quadrature on
// short pieces in x and a fine uniform rule in t
double brute_gamma_integral(const BreatherProblem& P, const Eigen::MatrixXcd& c) {
  const auto& B = P.basis();
  const auto& g = P.gamma();
  const int nt = 16 * (4 * P.ks().back() + 4);
  double sum = 0;
  for (auto [a, b] : g.pieces(-B.R(), B.R())) {
    std::vector<double> cut = sampled_jumps(P.potential(), a, b);
    cut.insert(cut.begin(), a);
    cut.push_back(b);
    for (std::size_t s = 0; s + 1 < cut.size(); ++s) {
      const int pieces = 4 + int(4 * (cut[s + 1] - cut[s]) * std::sqrt(B.lambda_max() * 9));
      for (int j = 0; j < pieces; ++j) {
        const double x0 = cut[s] + (cut[s + 1] - cut[s]) * j / pieces;
        const double x1 = cut[s] + (cut[s + 1] - cut[s]) * (j + 1) / pieces;
        sum += GL::integrate(
            [&](double x) {
              std::vector<cplx> uh(P.ks().size());
              for (std::size_t k = 0; k < uh.size(); ++k)
                for (std::size_t m = 0; m < B.size(); ++m) uh[k] += c(m, k) * B(m, x);
              double acc = 0;
              for (int it = 0; it < nt; ++it) {
                double u = 0;
                for (std::size_t k = 0; k < uh.size(); ++k)
                  u += 2 * (uh[k] * std::polar(1.0, 2 * std::numbers::pi * P.ks()[k] * it / nt)).real();
                acc += std::pow(std::abs(u), P.p() + 1);
              }
              return g(x) * acc / nt;
            },
            x0, x1);
      }
    }
  }
  return sum;
}

}  // namespace

TEST(ModeSet, OddMultiples) {
  EXPECT_EQ(mode_set(7), (std::vector<int>{1, 3, 5, 7}));
  EXPECT_EQ(mode_set(9, 3), (std::vector<int>{3, 9}));
  EXPECT_EQ(mode_set(1), (std::vector<int>{1}));
  EXPECT_THROW(mode_set(7, 2), std::invalid_argument);
  EXPECT_THROW(mode_set(1, 3), std::invalid_argument);
}

TEST(Functional, ZeroField) {
  const auto P = small_problem();
  const auto v = P.value(P.zero());
  EXPECT_EQ(v.J, 0.0);
  EXPECT_EQ(v.J0, 0.0);
  EXPECT_EQ(v.J1, 0.0);
  const auto W = P.gradient(P.zero());
  EXPECT_EQ(W.norm(), 0.0);
}

TEST(Functional, SingleModeQuadraticPart) {
  const auto P = small_problem();
  for (Eigen::Index m0 : {0, 3, 9}) {
    Eigen::MatrixXcd c = P.zero();
    c(m0, 0) = 1.0;
    EXPECT_NEAR(P.J0(c), 2 * (P.basis().eigenvalues()[m0] - kOmega * kOmega), 1e-13);
  }
}

TEST(Functional, EnergyBookkeeping) {
  const auto P = small_problem();
  const auto c = random_field(P, 3);
  double plus = 0, minus = 0;
  for (Eigen::Index m = 0; m < c.rows(); ++m)
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      const double e = 2 * std::abs(P.mu()(m, k)) * std::norm(c(m, k));
      (P.mu()(m, k) > 0 ? plus : minus) += e;
    }
  EXPECT_NEAR(P.J0(c), plus - minus, 1e-12 * (plus + minus));
  EXPECT_NEAR(P.h_norm_sq(c), plus + minus, 1e-12 * (plus + minus));
  EXPECT_GT(minus, 0.0);  // the discrete H- is nontrivial for K = 3
}

TEST(Functional, NonlinearPartMatchesIndependentQuadrature) {
  // p = 3: the default 4K + 4 time samples integrate |u|^4 exactly
  const auto P = small_problem(3.0);
  const auto c = random_field(P, 11, 0.3);
  const auto v = P.value(c);
  EXPECT_LT(rel_err(v.gamma_int, brute_gamma_integral(P, c)), 1e-6);
  EXPECT_NEAR(v.J1, 0.5 * v.gamma_int, 1e-15 * v.J1);
}

TEST(Functional, NonIntegerPowerConvergesInTime) {
  // p = 2.5: |u|^3.5 is not a trigonometric polynomial; refining the time
  // grid must shrink the aliasing error
  double prev = INFINITY, ref = 0;
  for (int tf : {1, 2, 4, 8}) {
    GridOptions g;
    g.time_factor = tf;
    const auto P = small_problem(2.5, 3, g);
    const auto c = random_field(P, 11, 0.3);
    if (tf == 1) ref = brute_gamma_integral(P, c);
    const double e = rel_err(P.value(c).gamma_int, ref);
    EXPECT_LT(e, prev) << tf;
    prev = e;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Functional, J1Homogeneity) {
  for (double p : {3.0, 2.5, 5.0}) {
    const auto P = small_problem(p);
    const auto c = random_field(P, 5);
    const double j = P.value(c).J1;
    for (double s : {0.1, 2.0, 7.5}) EXPECT_LT(rel_err(P.value(s * c).J1, std::pow(s, p + 1) * j), 1e-12) << p;
  }
}

TEST(Functional, TimeShiftInvariance) {
  // shifting t by T / nt multiplies mode k by exp(i k w dt); the grid maps to itself
  const auto P = small_problem();
  const auto c = random_field(P, 9);
  Eigen::MatrixXcd d = c;
  const double dt = 2 * std::numbers::pi / kOmega / P.grid().nt;
  for (std::size_t k = 0; k < P.ks().size(); ++k) d.col(k) *= std::polar(1.0, P.ks()[k] * kOmega * 5 * dt);
  EXPECT_LT(rel_err(P.value(d).J, P.value(c).J), 1e-12);
}

TEST(Functional, GradientMatchesCentralDifference) {
  for (double p : {3.0, 2.5}) {
    const auto P = small_problem(p);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto c = random_field(P, 100 + seed, 0.5);
      const auto d = random_field(P, 200 + seed);
      const double h = 1e-5;
      const double fd = (P.value(c + h * d).J - P.value(c - h * d).J) / (2 * h);
      const double an = BreatherProblem::directional(P.gradient(c), d);
      EXPECT_LT(rel_err(an, fd), 1e-6) << p << " seed " << seed;
    }
  }
}

TEST(Functional, RealCoefficientsGiveRealGradient) {
  // real c: u is even in t, so the sine part of the force vanishes
  const auto P = small_problem();
  Eigen::MatrixXcd c = random_field(P, 4).real().cast<cplx>();
  const auto W = P.gradient(c);
  EXPECT_LT(W.imag().norm(), 1e-12 * W.norm());
}

TEST(Functional, RejectsBadParameters) {
  const Potential V = two_step();
  auto basis = std::make_shared<const SpatialBasis>(V, 6.5, 40.0);
  EXPECT_THROW(BreatherProblem(basis, V, two_bumps(), 1.0, kOmega, mode_set(3)), std::domain_error);
  EXPECT_THROW(BreatherProblem(basis, V, two_bumps(), 3.0, 0.0, mode_set(3)), std::invalid_argument);
}
