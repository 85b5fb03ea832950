#include "common.hpp"

using namespace breather;
using namespace testing_util;

TEST(Potential, SingleStepIsConstant) {
  const Potential V = constant_potential();
  for (double x : {-7.3, -1.0, 0.0, 0.5, 3.25, 100.0}) EXPECT_EQ(V(x), 1.0);
  EXPECT_TRUE(V.purely_periodic());
  EXPECT_EQ(V.kind(), PotentialKind::periodic);
  EXPECT_EQ(V.r_minus(), V.r_plus());
}

TEST(Potential, TwoStepCellPhases) {
  const Potential V = two_step();
  const auto& cells = V.right().cells();
  ASSERT_EQ(cells.size(), 2u);
  // q_i = sqrt(a_i) * length_i
  EXPECT_DOUBLE_EQ(cells[0].q(), 1.0);
  EXPECT_DOUBLE_EQ(cells[1].q(), 3.0);
  ASSERT_TRUE(cells[0].exact_q() && cells[1].exact_q());
  EXPECT_EQ(*cells[0].exact_q(), Rational(1));
  EXPECT_EQ(*cells[1].exact_q(), Rational(3));
  EXPECT_EQ(V.right().exact_period(), std::optional<Rational>(Rational(2)));
}

TEST(Potential, ThreeCellPeriodicExtension) {
  const Potential V = make_periodic(
      {{Rational(1, 3), Rational(1)}, {Rational(1, 3), Rational(4)}, {Rational(1, 3), Rational(1)}},
      ExactNumber(Rational(3)));
  // cells [0,1) = 1, [1,2) = 4, [2,3) = 1 repeated with period 3
  EXPECT_EQ(V(3.5), 1.0);
  EXPECT_EQ(V(4.5), 4.0);
  EXPECT_EQ(V(0.5), 1.0);
  EXPECT_EQ(V(-1.5), 4.0);
  EXPECT_EQ(V(2.5), 1.0);
}

TEST(Potential, InvalidProfilesRejected) {
  using S = std::vector<std::pair<ExactNumber, ExactNumber>>;
  EXPECT_THROW(make_periodic(S{{Rational(1), Rational(0)}}, ExactNumber(1)), InvalidProfile);
  EXPECT_THROW(make_periodic(S{{Rational(1), Rational(-2)}}, ExactNumber(1)), InvalidProfile);
  EXPECT_THROW(make_periodic(S{{Rational(0), Rational(1)}, {Rational(1), Rational(2)}}, ExactNumber(1)),
               InvalidProfile);
  EXPECT_THROW(make_periodic(S{{Rational(1, 2), Rational(1)}, {Rational(1, 3), Rational(2)}}, ExactNumber(1)),
               InvalidProfile);
  EXPECT_THROW(make_periodic(S{{Rational(1), Rational(1)}}, ExactNumber(0)), InvalidProfile);
  EXPECT_THROW(make_dislocation(two_step(), ExactNumber(0), ExactNumber(1)), InvalidProfile);
  EXPECT_THROW(make_dislocation(two_step(), ExactNumber(1), ExactNumber(0)), InvalidProfile);
}

TEST(Potential, TailsAreBitExactlyPeriodic) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()}) {
    const double Xp = V.right().period(), Xm = V.left().period();
    for (int i = 0; i < 500; ++i) {
      const double x = V.r_plus() + u(rng);
      EXPECT_EQ(V(x + Xp), V(x)) << x;
      const double y = V.r_minus() - u(rng) - Xm;
      EXPECT_EQ(V(y - Xm), V(y)) << y;
    }
  }
}

TEST(Potential, DislocatingAConstantIsConstant) {
  const Potential V = make_dislocation(constant_potential(), ExactNumber(1), ExactNumber(0.37));
  for (double x = -5; x < 5; x += 0.01) EXPECT_EQ(V(x), 1.0);
}

TEST(Potential, DislocationLayout) {
  const Potential base = two_step();
  const Potential V = dislocated();
  EXPECT_EQ(V.kind(), PotentialKind::dislocation);
  ASSERT_EQ(V.core().size(), 1u);
  EXPECT_DOUBLE_EQ(V.core()[0].q(), 2.0);  // sqrt(4) * 1
  // base for x < 0, V0 on [0, d), shifted base for x >= d
  for (double x : {-3.7, -1.2, -0.5, -0.01}) EXPECT_EQ(V(x), base(x));
  for (double x : {0.0, 0.3, 0.999}) EXPECT_EQ(V(x), 4.0);
  for (double x : {1.0, 1.5, 2.2, 3.9, 10.1}) EXPECT_EQ(V(x), base(x - 1.0));
}

TEST(Potential, InterfaceLayout) {
  const Potential same = make_interface(two_step(), two_step());
  EXPECT_TRUE(same.purely_periodic());

  const Potential V = make_interface(two_step(1, 9), two_step(9, 1));
  EXPECT_EQ(V.r_minus(), 0.0);
  EXPECT_EQ(V.r_plus(), 0.0);
  EXPECT_EQ(V(-0.25), two_step(1, 9)(-0.25));
  EXPECT_EQ(V(0.25), two_step(9, 1)(0.25));
  EXPECT_EQ(V(-0.25), 9.0);
  EXPECT_EQ(V(0.25), 9.0);
  EXPECT_EQ(V(-1.25), 1.0);
  EXPECT_EQ(V(1.25), 1.0);

  const Potential W = make_interface(two_step(),
                                     make_periodic({{Rational(1, 3), Rational(1)}, {Rational(2, 3), Rational(4)}},
                                                   ExactNumber(Rational(3))));
  EXPECT_DOUBLE_EQ(W.left().period(), 2.0);
  EXPECT_DOUBLE_EQ(W.right().period(), 3.0);
  EXPECT_THROW(make_interface(dislocated(), two_step()), InvalidProfile);
}

TEST(Potential, JumpsMatchPointSampling) {
  for (const Potential& V : {two_step(), dislocated(), interface_same_side()}) {
    const double a = -6.3, b = 7.9;
    const auto jumps = V.jumps(a, b);
    const auto sampled = sampled_jumps(V, a, b);
    ASSERT_EQ(jumps.size(), sampled.size());
    double tv = 0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
      EXPECT_NEAR(jumps[i].first, sampled[i], 1e-12);
      const double x = sampled[i];
      EXPECT_DOUBLE_EQ(jumps[i].second, V(x + 1e-9) - V(x - 1e-9));
      tv += std::abs(V(x + 1e-9) - V(x - 1e-9));
    }
    EXPECT_DOUBLE_EQ(V.total_variation(a, b), tv);
  }
}

TEST(Potential, SegmentsTileTheInterval) {
  const Potential V = dislocated();
  const auto segs = V.segments(-3.3, 4.1);
  ASSERT_FALSE(segs.empty());
  EXPECT_DOUBLE_EQ(segs.front().x0, -3.3);
  EXPECT_DOUBLE_EQ(segs.back().x1, 4.1);
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) EXPECT_DOUBLE_EQ(segs[i].x1, segs[i + 1].x0);
  for (const auto& s : segs) EXPECT_EQ(V(0.5 * (s.x0 + s.x1)), s.value);
}

TEST(NonlinearityProfile, BumpShapeAndSupport) {
  const auto g = NonlinearityProfile::bump(1.5, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(g(1.5), 2.0);
  EXPECT_EQ(g(0.9), 0.0);
  EXPECT_EQ(g(2.0), 0.0);
  EXPECT_GT(g(1.9), 0.0);
  EXPECT_EQ(g.support_hull(), std::make_pair(1.0, 2.0));
  const auto h = g.scaled(0.25);
  for (double x = 0.9; x < 2.1; x += 0.05) EXPECT_DOUBLE_EQ(h(x), 0.25 * g(x));
}

TEST(NonlinearityProfile, ModesAndValidation) {
  const StepProfile per = StepProfile::from_fractions({{Rational(1, 2), 1}, {Rational(1, 2), 2}}, ExactNumber(2));
  EXPECT_THROW(NonlinearityProfile(GammaMode::asymptotically_periodic, std::nullopt, {}, {}), InvalidProfile);
  EXPECT_THROW(NonlinearityProfile(GammaMode::compact, per, {}, {}), InvalidProfile);
  EXPECT_THROW(NonlinearityProfile(GammaMode::compact, std::nullopt, {}, {}), InvalidProfile);
  EXPECT_THROW(NonlinearityProfile(GammaMode::compact, std::nullopt, {{0, 1, -1}}, {}), InvalidProfile);

  const NonlinearityProfile g(GammaMode::asymptotically_periodic, per, {{-1, 0, 0.5}}, {});
  EXPECT_DOUBLE_EQ(g(0.5), 1.0);
  EXPECT_DOUBLE_EQ(g(1.5), 2.0);
  EXPECT_DOUBLE_EQ(g(-0.5), 2.5);
  EXPECT_DOUBLE_EQ(g(-1.5), 1.0);
  EXPECT_DOUBLE_EQ(g(101.5), 2.0);
}

TEST(NonlinearityProfile, PiecesCoverSupportAndSplitAtKinks) {
  NonlinearityProfile g(GammaMode::compact, std::nullopt, {{0.2, 0.7, 1.0}},
                        {Bump{-0.5, 0.5, 1.0}, Bump{1.5, 0.5, 1.0}});
  const auto pieces = g.pieces(-3, 3);
  double covered = 0;
  for (auto [a, b] : pieces) covered += b - a;
  EXPECT_NEAR(covered, 1.0 + 0.5 + 1.0, 1e-14);
  for (auto [a, b] : pieces) EXPECT_GT(g(0.5 * (a + b)), 0.0);
  // nothing outside the pieces
  for (double x = -3; x < 3; x += 0.013) {
    bool inside = false;
    for (auto [a, b] : pieces) inside = inside || (x >= a && x <= b);
    if (!inside) {
      EXPECT_EQ(g(x), 0.0) << x;
    }
  }
}
