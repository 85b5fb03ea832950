#include "common.hpp"

using namespace breather;
using namespace testing_util;

namespace {

StepProfile steps(std::vector<std::pair<ExactNumber, ExactNumber>> s, ExactNumber X) {
  return StepProfile::from_fractions(s, X);
}

// |tr| - 2 of the right tail period at sqrt(lambda) = s, independent propagator
double excess(const Potential& V, Side side, double s) {
  const double x0 = side == Side::plus ? V.r_plus() : V.r_minus() - V.left().period();
  const double X = side == Side::plus ? V.right().period() : V.left().period();
  return std::abs(brute_transfer(V, x0, x0 + X, s * s).trace().real()) - 2.0;
}

// distance in sqrt(lambda) from x to the nearest band of either side: walk
// outward with step h until |tr| <= 2, then bisect
double scan_distance(const Potential& V, double x, double h) {
  double best = INFINITY;
  for (Side side : {Side::plus, Side::minus}) {
    if (excess(V, side, x) <= 0) return 0.0;
    for (int dir : {-1, 1}) {
      double a = x;
      for (double b = x + dir * h; b > 0 && std::abs(b - x) < best; b += dir * h) {
        if (excess(V, side, b) <= 0) {
          double lo = a, hi = b;  // lo in gap, hi in band
          for (int it = 0; it < 100 && std::abs(hi - lo) > 1e-14; ++it) {
            const double m = 0.5 * (lo + hi);
            (excess(V, side, m) > 0 ? lo : hi) = m;
          }
          best = std::min(best, std::abs(hi - x));
          break;
        }
        a = b;
      }
    }
  }
  return best;
}

}  // namespace

TEST(Multistep, TwoStepPasses) {
  const auto r = check_multistep(two_step().right(), ExactNumber(4));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.certified);
  ASSERT_TRUE(r.alpha);
  EXPECT_EQ(*r.alpha, Rational(1, 9));
  EXPECT_EQ(r.odd_indices, (std::vector<int>{1, 2}));
  EXPECT_EQ(r.multiples, (std::vector<double>{1.0, 3.0}));
}

TEST(Multistep, ConstantFailsOnParity) {
  const auto r = check_multistep(constant_potential().right(), ExactNumber(4));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.odd_indices, (std::vector<int>{1}));
}

TEST(Multistep, EqualValuesFailOnAlpha) {
  const auto r = check_multistep(two_step(4, 4).right(), ExactNumber(4));
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.alpha);
  EXPECT_EQ(*r.alpha, Rational(1));
}

TEST(Multistep, NonMultipleFails) {
  const auto r = check_multistep(two_step().right(), ExactNumber(3));
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.certified);
  EXPECT_THROW(check_multistep(two_step().right(), ExactNumber(0)), std::invalid_argument);
}

TEST(Multistep, FloatFallbackAgreesButIsUncertified) {
  const auto r = check_multistep(two_step().right(), ExactNumber(4.0));
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.certified);
  EXPECT_NEAR(r.alpha_value, 1.0 / 9.0, 1e-15);
}

TEST(AdmissiblePeriods, TwoStep) {
  const auto r = admissible_periods(two_step().right());
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.q);
  EXPECT_EQ(*r.q, Rational(1));
  EXPECT_EQ(r.ratios, (std::vector<std::int64_t>{1, 3}));
  for (int k : {1, 3, 5}) {
    EXPECT_EQ(*r.exact_period(k), Rational(4, k));
    EXPECT_TRUE(check_multistep(two_step().right(), ExactNumber(Rational(4, k))).pass) << k;
  }
}

TEST(AdmissiblePeriods, EvenRatioFails) {
  // a = (1, 4) on equal halves of X = 2: q = (1, 2)
  const auto r = admissible_periods(steps({{Rational(1, 2), 1}, {Rational(1, 2), 4}}, Rational(2)));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(*r.q, Rational(1));
  EXPECT_EQ(r.odd_count, 1);
}

TEST(AdmissiblePeriods, ThreeStepGcdFromDenominators) {
  // a = (1, 9, 4), lengths (1, 1, 1/3): q = (1, 3, 2/3); q2/q1 = 3/1 odd/odd,
  // q3/q1 = 2/3 with even numerator, so q = q1 / lcm(1, 3) = 1/3
  const auto prof = steps({{Rational(3, 7), 1}, {Rational(3, 7), 9}, {Rational(1, 7), 4}}, Rational(7, 3));
  const auto r = admissible_periods(prof);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(*r.q, Rational(1, 3));
  EXPECT_EQ(r.ratios, (std::vector<std::int64_t>{3, 9, 2}));
  EXPECT_EQ(r.odd_count, 2);
  EXPECT_EQ(*r.alpha, Rational(1, 9));
  EXPECT_TRUE(check_multistep(prof, ExactNumber(*r.exact_period(1))).pass);
}

TEST(AdmissiblePeriods, IncommensurableNotApplicable) {
  const auto r = admissible_periods(steps({{0.5, 1.0}, {0.5, 2.0}}, 2.0));
  EXPECT_FALSE(r.applicable);
  EXPECT_FALSE(r.pass);
}

TEST(Dislocation, EvenCoreMultiplePasses) {
  const auto r = check_dislocation(dislocated(), ExactNumber(4));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.certified);
  EXPECT_DOUBLE_EQ(r.q0, 2.0);
  EXPECT_DOUBLE_EQ(r.multiple, 2.0);
}

TEST(Dislocation, OddCoreMultipleFails) {
  const Potential V = make_dislocation(two_step(), ExactNumber(1), ExactNumber(1));
  const auto r = check_dislocation(V, ExactNumber(4));
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.multiple, 1.0);
  // rational width keeps exactness: V0 = 16, d = 1/2 gives 4 q0 / T = 2
  const Potential W = make_dislocation(two_step(), ExactNumber(16), ExactNumber(Rational(1, 2)));
  const auto w = check_dislocation(W, ExactNumber(4));
  EXPECT_TRUE(w.pass);
  EXPECT_TRUE(w.certified);
  EXPECT_THROW(check_dislocation(two_step(), ExactNumber(4)), std::invalid_argument);
}

TEST(Interface, SameSidePasses) {
  const auto r = check_interface(interface_same_side(), ExactNumber(4));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.alpha_minus, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.alpha_plus, 1.0 / 25.0, 1e-15);
  const auto s = check_interface(make_interface(two_step(), two_step()), ExactNumber(4));
  EXPECT_TRUE(s.pass);
}

TEST(Interface, OppositeSidesFail) {
  const auto r = check_interface(make_interface(two_step(1, 9), two_step(9, 1)), ExactNumber(4));
  EXPECT_TRUE(r.applicable);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.alpha_minus, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.alpha_plus, 9.0, 1e-15);
}

TEST(Interface, BothAboveOnePasses) {
  // left a = (4, 1) on lengths (1/2, 1): q = (1, 1), alpha = 4; right alpha = 9
  const Potential left = make_periodic(steps({{Rational(1, 3), 4}, {Rational(2, 3), 1}}, Rational(3, 2)));
  const auto r = check_interface(make_interface(left, two_step(9, 1)), ExactNumber(4));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.alpha_minus, 4.0, 1e-15);
  EXPECT_NEAR(r.alpha_plus, 9.0, 1e-15);
}

TEST(Interface, FailingSideIsNotApplicable) {
  const auto r = check_interface(make_interface(two_step(), constant_potential(2.0)), ExactNumber(4));
  EXPECT_FALSE(r.applicable);
  EXPECT_FALSE(r.pass);
}

TEST(ScaleInvariance, VerdictsUnchanged) {
  // a -> s^2 a, X -> X / s leaves every q_i fixed
  const auto base = two_step().right();
  const auto scaled = steps({{Rational(1, 2), 36}, {Rational(1, 2), 324}}, Rational(1, 3));
  for (ExactNumber T : {ExactNumber(4), ExactNumber(Rational(4, 3)), ExactNumber(3)}) {
    const auto a = check_multistep(base, T), b = check_multistep(scaled, T);
    EXPECT_EQ(a.pass, b.pass);
    EXPECT_EQ(a.odd_indices, b.odd_indices);
    EXPECT_EQ(a.alpha, b.alpha);
  }
  EXPECT_EQ(*admissible_periods(base).q, *admissible_periods(scaled).q);
}

TEST(A3, TwoStepHasPositiveDistance) {
  const Potential V = two_step();
  const auto bs = band_scan(V, std::pow(10 * kOmega, 2));
  const auto r = verify_a3_numeric(V, kOmega, bs, {}, 9, ExactNumber(4));
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.delta, 0.1);
  EXPECT_EQ(r.certification, "exact-periodicity");
  ASSERT_EQ(r.per_k.size(), 5u);
  // sqrt(lambda)-period 4w: k and k + 4 see the same distance
  EXPECT_NEAR(r.per_k[0], r.per_k[2], 1e-12);
  EXPECT_NEAR(r.per_k[1], r.per_k[3], 1e-12);
  EXPECT_NEAR(r.per_k[2], r.per_k[4], 1e-12);
}

TEST(A3, ConstantHasZeroDistance) {
  const Potential V = constant_potential();
  const auto bs = band_scan(V, std::pow(8 * kOmega, 2));
  const auto r = verify_a3_numeric(V, kOmega, bs, {}, 7);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.certification, "numeric-scan");
  EXPECT_THROW(verify_a3_numeric(V, kOmega, bs, {}, 9), std::invalid_argument);
}

TEST(A3, AgreesWithFinerIndependentScan) {
  for (const Potential& V : {two_step(), interface_same_side()}) {
    const auto bs = band_scan(V, std::pow(8 * kOmega, 2));
    const auto r = verify_a3_numeric(V, kOmega, bs, {}, 7);
    const double h = 0.1 * default_resolution(V);
    double delta = INFINITY;
    for (int k = 1; k <= 7; k += 2) delta = std::min(delta, scan_distance(V, k * kOmega, h));
    EXPECT_NEAR(r.delta, delta, 1e-8);
  }
}

TEST(A4, Verdicts) {
  const auto bs = band_scan(two_step(), std::pow(12 * kOmega, 2));
  const auto periodic = check_a4(two_step(), gap_eigenvalues(two_step(), bs), kOmega);
  EXPECT_TRUE(periodic.pass);

  const Potential V = dislocated();
  const auto bd = band_scan(V, std::pow(12 * kOmega, 2) + 1);
  const auto eigs = gap_eigenvalues(V, bd);
  const auto d = check_a4(V, eigs, kOmega);
  EXPECT_TRUE(d.pass);
  ASSERT_EQ(d.window_counts.size(), 3u);
  EXPECT_GT(d.window_counts[0], 0);
  EXPECT_EQ(d.first_window.size(), std::size_t(d.window_counts[0]));

  auto fewer = eigs;
  fewer.pop_back();
  EXPECT_FALSE(check_a4(V, fewer, kOmega).pass);
}

TEST(Embedding, FiniteForTwoStep) {
  const Potential V = two_step();
  const auto bs = band_scan(V, std::pow(12 * kOmega, 2));
  const auto e = embedding_series_estimate(bs, {}, kOmega, 3.0, 9, &V);
  EXPECT_DOUBLE_EQ(e.s, 3.0);
  EXPECT_TRUE(e.finite);
  EXPECT_TRUE(e.pass);
  EXPECT_LT(e.truncation_change, 0.01);
  EXPECT_GE(e.value, e.truncated);
  EXPECT_THROW(embedding_series_estimate(bs, {}, kOmega, 2.0, 9, &V), std::domain_error);
  EXPECT_THROW(embedding_series_estimate(bs, {}, kOmega, 3.0, 13, &V), std::invalid_argument);
}

TEST(Embedding, DivergesForConstant) {
  const Potential V = constant_potential();
  const auto bs = band_scan(V, std::pow(10 * kOmega, 2));
  const auto e = embedding_series_estimate(bs, {}, kOmega, 3.0, 7, &V);
  EXPECT_FALSE(e.pass);
  EXPECT_FALSE(e.finite);
}

TEST(CheckAssumptions, EndToEnd) {
  const auto ok = check_assumptions(two_step(), nullptr, ExactNumber(4), {7, 3.0});
  EXPECT_TRUE(ok.all_pass);
  ASSERT_TRUE(ok.multistep && ok.admissible && ok.embedding);
  EXPECT_TRUE(ok.eigenvalues.empty());

  const auto bad = check_assumptions(constant_potential(), nullptr, ExactNumber(4), {7, 3.0});
  EXPECT_FALSE(bad.all_pass);
  EXPECT_FALSE(bad.a3.pass);

  const auto dis = check_assumptions(dislocated(), nullptr, ExactNumber(4));
  EXPECT_TRUE(dis.all_pass);
  ASSERT_TRUE(dis.dislocation);
  EXPECT_FALSE(dis.eigenvalues.empty());

  EXPECT_TRUE(exact_periodicity(dislocated(), ExactNumber(4)));
  EXPECT_FALSE(exact_periodicity(two_step(), ExactNumber(3)));
  EXPECT_FALSE(exact_periodicity(two_step(), ExactNumber(4.0)));
}
