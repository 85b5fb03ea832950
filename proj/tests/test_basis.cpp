#include "common.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

using namespace breather;
using namespace testing_util;

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

// lowest n eigenvalues of the second-order finite-difference Dirichlet problem
// on [-R, R] with lumped weights V(x_i); the grid puts every integer jump at a
// cell midpoint when (R * N) is a half-integer
std::vector<double> fd_eigenvalues(const Potential& V, double R, int N, int n) {
  const double h = 1.0 / N;
  const int M = int(std::lround(2 * R * N)) - 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M), B = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    A(i, i) = 2 / (h * h);
    if (i > 0) A(i, i - 1) = A(i - 1, i) = -1 / (h * h);
    B(i, i) = V(-R + (i + 1) * h);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

}  // namespace

TEST(SpatialBasis, FreeDirichletEigenvalues) {
  const Potential V = constant_potential();
  const double R = default_half_width(V);
  EXPECT_DOUBLE_EQ(R, 8.25);
  const SpatialBasis B(V, R, 120.0);
  ASSERT_GE(B.size(), 50u);
  EXPECT_EQ(B.size(), std::size_t(std::floor(2 * R * std::sqrt(120.0) / std::numbers::pi)));
  for (std::size_t m = 1; m <= 50; ++m) {
    const double exact = std::pow(m * std::numbers::pi / (2 * R), 2);
    EXPECT_LT(rel_err(B.eigenvalues()[m - 1], exact), 1e-4) << m;
  }
}

TEST(SpatialBasis, EigenvaluesIncreasingAndBelowCut) {
  const SpatialBasis B(dislocated(), default_half_width(dislocated()), 200.0);
  const auto& l = B.eigenvalues();
  EXPECT_GT(l.front(), 0.0);
  EXPECT_LT(l.back(), 200.0);
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_LT(l[i - 1], l[i]);
}

TEST(SpatialBasis, OrthonormalInWeightedL2) {
  for (const Potential& V : {two_step(), dislocated()}) {
    const double R = 6.5;
    const SpatialBasis B(V, R, 60.0);
    const std::size_t n = B.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (const auto& s : B.segments()) {
      const int pieces = 1 + int(s.length() * std::sqrt(60.0 * s.value));
      for (int j = 0; j < pieces; ++j) {
        const double a = s.x0 + s.length() * j / pieces, b = s.x0 + s.length() * (j + 1) / pieces;
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = p; q < n; ++q)
            G(p, q) += s.value * GL::integrate([&](double x) { return B(p, x) * B(q, x); }, a, b);
      }
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p; q < n; ++q) EXPECT_NEAR(G(p, q), p == q ? 1.0 : 0.0, 1e-10) << p << "," << q;
  }
}

TEST(SpatialBasis, DirichletEndsAndSmoothMatching) {
  const Potential V = dislocated();
  const double R = default_half_width(V);
  const SpatialBasis B(V, R, 100.0);
  for (std::size_t m = 0; m < B.size(); m += 7) {
    double scale = 0;
    for (double x = -R; x <= R; x += 0.05) scale = std::max(scale, std::abs(B(m, x)));
    EXPECT_LT(std::abs(B(m, -R)), 1e-12 * scale);
    EXPECT_LT(std::abs(B(m, R)), 1e-9 * scale) << m;
    // phi and phi' continuous across every jump
    for (double x : sampled_jumps(V, -R + 0.1, R - 0.1)) {
      EXPECT_NEAR(B(m, x - 1e-12), B(m, x + 1e-12), 1e-8 * scale);
      const double dl = B.derivative(m, x - 1e-12), dr = B.derivative(m, x + 1e-12);
      EXPECT_NEAR(dl, dr, 1e-7 * scale * std::sqrt(100.0 * 9));
    }
  }
}

TEST(SpatialBasis, DerivativeMatchesDifferenceQuotient) {
  const SpatialBasis B(two_step(), 6.5, 50.0);
  for (std::size_t m : {0u, 3u, 10u})
    for (double x : {-5.3, -0.7, 0.25, 2.6, 6.1}) {
      const double h = 1e-6;
      EXPECT_NEAR(B.derivative(m, x), (B(m, x + h) - B(m, x - h)) / (2 * h), 1e-5) << m << " " << x;
    }
  EXPECT_THROW(B(0, 7.0), std::out_of_range);
}

TEST(SpatialBasis, MatrixMatchesPointwise) {
  const SpatialBasis B(two_step(), 6.5, 30.0);
  const std::vector<double> xs{-6.0, -1.1, 0.0, 0.9, 3.3};
  const Eigen::MatrixXd A = B.matrix(xs);
  ASSERT_EQ(A.rows(), 5);
  ASSERT_EQ(A.cols(), Eigen::Index(B.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t m = 0; m < B.size(); ++m) EXPECT_EQ(A(i, m), B(m, xs[i]));
}

TEST(SpatialBasis, FiniteDifferenceConvergesAtSecondOrder) {
  // R = 4.5 and N odd: every jump at an integer sits at a cell midpoint
  const Potential V = two_step();
  const double R = 4.5;
  const SpatialBasis B(V, R, 40.0);
  const int n = 8;
  ASSERT_GE(B.size(), std::size_t(n));
  const auto f1 = fd_eigenvalues(V, R, 5, n), f2 = fd_eigenvalues(V, R, 15, n), f3 = fd_eigenvalues(V, R, 45, n);
  for (int m = 0; m < n; ++m) {
    const double ref = B.eigenvalues()[m];
    const double e1 = f1[m] - ref, e2 = f2[m] - ref, e3 = f3[m] - ref;
    // spacing ratio 3 gives an error ratio near 9
    EXPECT_GT(e2 / e3, 7.0) << m;
    EXPECT_LT(e2 / e3, 11.0) << m;
    EXPECT_GT(e1 / e2, 5.0) << m;
    // Richardson from the two finest grids lands on the Prufer eigenvalue
    const double rich = (9 * f3[m] - f2[m]) / 8;
    EXPECT_LT(std::abs(rich - ref), 0.05 * std::abs(e3)) << m;
  }
}

TEST(SpatialBasis, RejectsBadArguments) {
  EXPECT_THROW(SpatialBasis(two_step(), 0.0, 10.0), std::invalid_argument);
  EXPECT_THROW(SpatialBasis(two_step(), 5.0, 0.0), std::invalid_argument);
  EXPECT_THROW(SpatialBasis(two_step(), 0.1, 1e-3), std::invalid_argument);
}
