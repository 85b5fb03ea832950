#include "common.hpp"

using namespace breather;
using namespace testing_util;

namespace {

std::vector<cplx> random_lambdas(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-20.0, 200.0), im(-15.0, 15.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.emplace_back(re(rng), im(rng));
  return out;
}

double det_error(const Mat2<cplx>& m) {
  return std::abs(m.det() - 1.0) / std::max(1.0, max_abs(m) * max_abs(m));
}

}  // namespace

TEST(CellMatrix, HalfTurnIsMinusIdentity) {
  const auto m = cell_matrix(1.0, std::numbers::pi, 1.0).m;
  EXPECT_NEAR(std::abs(m.a + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.b), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.c), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.d + 1.0), 0.0, 1e-15);
}

TEST(CellMatrix, ZeroLambdaIsIdentityInWeightedCoordinates) {
  const auto m = cell_matrix(4.0, 0.7, 0.0).m;
  EXPECT_EQ(m.a, cplx(1.0));
  EXPECT_EQ(m.b, cplx(0.0));
  EXPECT_EQ(m.c, cplx(0.0));
  EXPECT_EQ(m.d, cplx(1.0));
  // the (u, u') propagator has the shear form at lambda = 0
  const auto P = cell_propagator(4.0, 0.7, 0.0);
  EXPECT_DOUBLE_EQ(P.a, 1.0);
  EXPECT_DOUBLE_EQ(P.b, 0.7);
  EXPECT_DOUBLE_EQ(P.c, 0.0);
  EXPECT_DOUBLE_EQ(P.d, 1.0);
}

TEST(CellMatrix, NearZeroSeriesIsContinuous) {
  for (double lam : {1e-14, 1e-10, 1e-9, 1e-7}) {
    const auto P = cell_propagator(9.0, 0.5, lam);
    const double k = std::sqrt(9.0 * lam);
    EXPECT_NEAR(P.a, std::cos(k * 0.5), 1e-15);
    EXPECT_NEAR(P.b, std::sin(k * 0.5) / k, 1e-15);
    EXPECT_NEAR(P.c, -k * std::sin(k * 0.5), 1e-15);
  }
}

TEST(CellMatrix, UnitDeterminant) {
  for (cplx lam : {cplx(1), cplx(2, 3), cplx(100)}) {
    EXPECT_LT(std::abs(cell_matrix(9.0, 0.5, lam).det() - 1.0), 1e-12) << lam;
    EXPECT_LT(std::abs(cell_matrix(1.0, 3.0, lam).det() - 1.0), 1e-12) << lam;
  }
}

TEST(Transfer, AgreesWithIndependentPropagator) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (cplx lam : random_lambdas(10, 3)) {
      const auto P = transfer(V, -3.1, 4.6, lam);
      const auto B = brute_transfer(V, -3.1, 4.6, lam);
      const double s = std::max(1.0, max_abs(B));
      EXPECT_LT(max_abs(P - B) / s, 1e-11) << lam;
    }
}

TEST(Monodromy, UnitDeterminantAcrossClasses) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (cplx lam : random_lambdas(20, 11))
      for (Side s : {Side::plus, Side::minus}) {
        EXPECT_LT(det_error(monodromy(V, s, lam).m), 1e-12) << lam;
        EXPECT_LT(det_error(monodromy_jet(V, s, lam).m), 1e-12) << lam;
      }
}

TEST(Monodromy, FreeTraceIsTwoCosine) {
  const Potential V = constant_potential(std::numbers::pi);
  EXPECT_NEAR(monodromy(V, Side::plus, 1.0).trace().real(), -2.0, 1e-14);
  const Potential W = constant_potential(1.0);
  for (double lam : {0.1, 2.0, 17.3, 99.0})
    EXPECT_NEAR(monodromy(W, Side::plus, lam).trace().real(), 2.0 * std::cos(std::sqrt(lam)), 1e-12);
}

TEST(Monodromy, TwoStepAtOddHarmonicsIsDiagonal) {
  // at lambda = k^2 w^2 every cell is a quarter or three-quarter turn
  const Potential V = two_step();
  for (int k : {1, 3, 5}) {
    const double lam = k * k * kOmega * kOmega;
    const auto m = monodromy(V, Side::plus, lam).m;
    EXPECT_NEAR(std::abs(m.b), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(m.c), 0.0, 1e-12);
    std::vector<double> d{std::abs(m.a), std::abs(m.d)};
    std::sort(d.begin(), d.end());
    EXPECT_NEAR(d[0], 1.0 / 3.0, 1e-12);  // sqrt(alpha), alpha = 1/9
    EXPECT_NEAR(d[1], 3.0, 1e-12);
    EXPECT_NEAR(std::abs(m.trace()), 10.0 / 3.0, 1e-12);
  }
}

TEST(Monodromy, RealTraceOnRealAxis) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (double lam = 0.05; lam < 300; lam *= 1.37)
      for (Side s : {Side::plus, Side::minus}) EXPECT_LT(std::abs(monodromy(V, s, lam).trace().imag()), 1e-12);
}

TEST(Monodromy, TraceDerivativeMatchesCentralDifference) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (double lam = 0.3; lam < 300; lam *= 1.29)
      for (Side s : {Side::plus, Side::minus}) {
        const double h = 1e-5 * std::max(1.0, lam);
        const double fd = (monodromy(V, s, lam + h).trace().real() - monodromy(V, s, lam - h).trace().real()) / (2 * h);
        const double an = monodromy_jet(V, s, cplx(lam)).trace_prime().real();
        if (std::abs(an) < 1e-3) continue;  // near a critical point of the trace
        EXPECT_LT(rel_err(an, fd), 1e-6) << lam;
      }
}

TEST(Monodromy, TraceDerivativeOffTheRealAxis) {
  // large |tr| at Re lambda < 0 used to cancel away all digits on the minus side
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (cplx lam : random_lambdas(40, 17))
      for (Side s : {Side::plus, Side::minus}) {
        const double x0 = s == Side::plus ? V.r_plus() : V.r_minus() - V.left().period();
        const double X = s == Side::plus ? V.right().period() : V.left().period();
        auto tr = [&](cplx z) { return brute_transfer(V, x0, x0 + X, z).trace(); };
        const double h = 1e-5 * std::max(1.0, std::abs(lam));
        const cplx fd = (tr(lam + h) - tr(lam - h)) / (2 * h);
        EXPECT_LT(rel_err(floquet(V, s, lam).trace_prime, fd), 1e-6) << lam;
        EXPECT_LT(rel_err(monodromy_jet(V, s, lam).trace_prime(), fd), 1e-6) << lam;
        EXPECT_LT(rel_err(floquet(V, s, lam).trace, tr(lam)), 1e-12) << lam;
      }
}

TEST(Floquet, GapBranchHasModulusBelowOne) {
  const auto f = floquet(two_step(), Side::plus, cplx(kOmega * kOmega));
  EXPECT_FALSE(f.band);
  EXPECT_FALSE(f.singular);
  EXPECT_NEAR(std::abs(f.trace.real()), 10.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::abs(f.rho), 1.0 / 3.0, 1e-12);
  // characteristic equation with unit determinant
  EXPECT_LT(std::abs(f.rho * f.rho - f.trace * f.rho + 1.0), 1e-12);
}

TEST(Floquet, DoubleRootIsFlaggedSingular) {
  const auto f = floquet(constant_potential(std::numbers::pi), Side::plus, cplx(1.0));
  EXPECT_TRUE(f.singular);
  EXPECT_NEAR(f.rho.real(), -1.0, 1e-14);
}

TEST(Floquet, BandBranchContinuedFromAbove) {
  const Potential V = two_step();
  const auto bs = band_scan(V, 200.0);
  int checked = 0;
  for (const auto& b : bs.plus.bands) {
    for (int j = 1; j < 8; ++j) {
      const double lam = b.lo + b.width() * j / 8.0;
      const auto f = floquet(V, Side::plus, cplx(lam));
      ASSERT_TRUE(f.band);
      EXPECT_NEAR(std::abs(f.rho), 1.0, 1e-12);
      const cplx z = f.rho_prime * std::conj(f.rho);
      EXPECT_LT(std::abs(z.real()), 1e-10 * std::abs(z));
      EXPECT_GT(z.imag(), 0.0);
      // the branch agrees with the |rho| < 1 root just above the axis
      const auto g = floquet(V, Side::plus, cplx(lam, 1e-7 * std::max(1.0, lam)));
      EXPECT_LT(std::abs(g.rho - f.rho), 1e-3);
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Floquet, UpperHalfPlaneContracts) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (cplx lam : random_lambdas(30, 5)) {
      const cplx z(lam.real(), std::abs(lam.imag()) + 1e-3);
      for (Side s : {Side::plus, Side::minus}) EXPECT_LT(std::abs(floquet(V, s, z).rho), 1.0);
    }
}

TEST(Floquet, NoBranchFlipsAlongBands) {
  const Potential V = two_step();
  const auto bs = band_scan(V, 400.0);
  for (const auto& b : bs.plus.bands) {
    const int n = 400;
    cplx prev = floquet(V, Side::plus, cplx(b.lo + b.width() * 0.5 / n)).rho;
    for (int j = 1; j < n; ++j) {
      const cplx r = floquet(V, Side::plus, cplx(b.lo + b.width() * (j + 0.5) / n)).rho;
      EXPECT_LT(std::abs(r - prev), 0.5);
      prev = r;
    }
  }
}

TEST(Floquet, EigenvectorOfMonodromy) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (double lam : {0.7, 3.3, 12.5, 47.0})
      for (Side s : {Side::plus, Side::minus}) {
        const auto f = floquet(V, s, cplx(lam));
        if (f.singular) continue;
        const auto m = monodromy(V, s, lam).m;
        const Vec2<cplx> mv = m * f.v;
        EXPECT_LT(norm(Vec2<cplx>{mv[0] - f.rho * f.v[0], mv[1] - f.rho * f.v[1]}), 1e-10);
        EXPECT_NEAR(norm(f.v), 1.0, 1e-14);
      }
}

TEST(Propagate, IdentityAndFreeCosine) {
  const Potential V = two_step();
  const Vec2<cplx> x{cplx(0.3, -1), cplx(2, 0.5)};
  const auto y = propagate(V, 1.7, 1.7, 5.0, x);
  EXPECT_EQ(y[0], x[0]);
  EXPECT_EQ(y[1], x[1]);

  const Potential W = constant_potential();
  for (double lam : {0.5, 4.0, 30.0})
    for (double s : {0.1, 1.3, 7.7}) {
      const double k = std::sqrt(lam);
      const auto z = propagate(W, 0.2, 0.2 + s, lam, {cplx(k), cplx(0)});
      EXPECT_NEAR(std::abs(z[0] - k * std::cos(k * s)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(z[1] + k * std::sin(k * s)), 0.0, 1e-12);
    }
}

TEST(Propagate, FlowProperty) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()})
    for (cplx lam : random_lambdas(10, 17)) {
      const Vec2<cplx> x{cplx(1, 0.2), cplx(-0.4, 0.9)};
      const auto direct = propagate(V, -2.3, 3.9, lam, x);
      const auto split = propagate(V, 0.45, 3.9, lam, propagate(V, -2.3, 0.45, lam, x));
      const double s = std::max(1.0, norm(direct));
      EXPECT_LT(std::abs(direct[0] - split[0]) / s, 1e-12);
      EXPECT_LT(std::abs(direct[1] - split[1]) / s, 1e-12);
      // backward propagation inverts; roundoff scales with the growth factor
      const auto back = propagate(V, 3.9, -2.3, lam, direct);
      const double g = max_abs(transfer_weighted(V, -2.3, 3.9, lam).m);
      EXPECT_LT(norm(Vec2<cplx>{back[0] - x[0], back[1] - x[1]}), 1e-14 * g * g) << lam;
    }
}
