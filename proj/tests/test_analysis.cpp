#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sphera/analysis.hpp"
#include "sphera/kernels.hpp"

using namespace sphera;

TEST(VerifyReflection, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const auto zero = verify_reflection(s, {0.0, 0.0});
  EXPECT_TRUE(zero.pass);
  EXPECT_LT(zero.residual_abs, 1e-12);
  EXPECT_NEAR(zero.lhs.real(), 4 * kPi, 1e-12);
  EXPECT_TRUE(verify_reflection(s, {1.7, 0.0}).pass);
  const auto ext = verify_reflection(SphereSetup::make(3, 2.0, 3.0), {0.8, 0.4});
  EXPECT_TRUE(ext.pass);
  EXPECT_EQ(ext.identity, "reflection");
  EXPECT_EQ(ext.pass, ext.residual_abs <= ext.tolerance);
  EXPECT_NEAR(ext.tolerance, std::max(1e-8 * std::abs(ext.lhs), 4 * ext.quad_error), 1e-300);
}

TEST(VerifyReflection, NonConvergenceIsInconclusive) {
  QuadConfig cfg;
  cfg.max_evals = 100;
  cfg.abs_tol = 1e-30;
  cfg.rel_tol = 1e-16;  // below the rounding floor of the panel estimates
  const auto rep = verify_reflection(SphereSetup::make(2, 1.0, 0.999), {0.4, 0.0}, cfg);
  EXPECT_TRUE(rep.inconclusive);
  EXPECT_FALSE(rep.pass);
}

TEST(VerifyImagVanishing, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const auto b0 = verify_imag_vanishing(s, 0.0, 0);
  EXPECT_TRUE(b0.pass);
  EXPECT_EQ(log_moment(s, 1.0, 0, {TrigKind::sin, 0.0}).value, 0.0);
  EXPECT_TRUE(verify_imag_vanishing(s, 1.0, 0).pass);
  const auto near = verify_imag_vanishing(SphereSetup::make(1, 1.0, 0.9), 2.0, 1);
  EXPECT_TRUE(near.pass);
  EXPECT_LT(near.residual_abs, 1e-8 * evaluate_F(SphereSetup::make(1, 1.0, 0.9), {0.5, 0.0}).W);
  EXPECT_THROW(verify_imag_vanishing(s, 1.0, 6), DomainError);
}

TEST(VerifyDistance, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const auto self = verify_distance_identity(s, {2.0, 0.0});
  EXPECT_TRUE(self.pass);
  EXPECT_EQ(self.lhs, self.rhs);
  const auto newton = verify_distance_identity(s, {1.0, 0.0});
  EXPECT_TRUE(newton.pass);
  EXPECT_NEAR(newton.lhs.real(), 4 * kPi, 1e-10);
  EXPECT_NEAR(newton.rhs.real(), 4 * kPi, 1e-10);
  const auto outside = verify_distance_identity(SphereSetup::make(2, 1.0, 2.0), {1.0, 0.0});
  EXPECT_TRUE(outside.pass);
  EXPECT_NEAR(outside.lhs.real(), oracle::newton_shell(1.0, 2.0), 1e-10);
  EXPECT_TRUE(verify_distance_identity(SphereSetup::make(4, 1.0, 0.3), {1.5, 0.7}).pass);
}

TEST(VerifyK1Trig, Examples) {
  const auto one = verify_k1_trig(1.0, 2.0, 1.0);
  EXPECT_TRUE(one.pass);
  EXPECT_NEAR(one.lhs.real(), 2 * kPi / std::sqrt(3.0), 1e-10);
  const auto zero = verify_k1_trig(0.0, 2.0, 1.0);
  EXPECT_NEAR(zero.lhs.real(), 2 * kPi, 1e-12);
  EXPECT_NEAR(zero.rhs.real(), 2 * kPi, 1e-10);
  EXPECT_TRUE(verify_k1_trig({0.5, 0.3}, 3.0, 1.0).pass);
  EXPECT_THROW(verify_k1_trig(1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(verify_k1_trig(1.0, 2.0, 0.0), DomainError);
}

TEST(ClosedFormK2, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const auto b0 = closed_form_k2(s, 0.0);
  EXPECT_TRUE(b0.pass);
  EXPECT_NEAR(b0.rhs.real(), 3 * kPi * std::log(3.0), 1e-13);
  const auto b1 = closed_form_k2(s, 1.0);
  EXPECT_TRUE(b1.pass);
  EXPECT_NEAR(b1.rhs.real(), 3 * kPi * std::sin(std::log(3.0)), 1e-13);
  const auto zero = closed_form_k2(s, kPi / std::log(3.0));
  EXPECT_TRUE(zero.pass);
  EXPECT_LT(std::abs(zero.lhs), 1e-10);
  EXPECT_THROW(closed_form_k2(SphereSetup::make(2, 1.0, 0.0), 1.0), DomainError);
  EXPECT_THROW(closed_form_k2(SphereSetup::make(3, 1.0, 0.5), 1.0), DomainError);
  // against the independent complex-argument oracle
  for (double b : {0.5, 5.0}) EXPECT_NEAR(closed_form_k2_value(s, b), oracle::k2_transform(1.0, 0.5, {1.0, b}).real(), 1e-12);
}

class DefaultSuite : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(DefaultSuite, AllReportsPass) {
  const auto [k, r] = GetParam();
  const auto s = SphereSetup::make(k, 1.0, r);
  const auto reports = default_suite(s);
  EXPECT_GE(reports.size(), 14u);
  for (const auto& rep : reports) {
    EXPECT_TRUE(rep.pass) << rep.identity << " residual " << rep.residual_abs << " tol " << rep.tolerance;
    EXPECT_FALSE(rep.inconclusive) << rep.identity;
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, DefaultSuite,
                         ::testing::Combine(::testing::Values(1, 2, 3, 5),
                                            ::testing::Values(0.1, 0.5, 0.9, 1.5, 10.0)));

TEST(DefaultSuite, CentreOfTheSphere) {
  for (const auto& rep : default_suite(SphereSetup::make(3, 1.0, 0.0))) EXPECT_TRUE(rep.pass) << rep.identity;
}

TEST(SolveReal, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const double fmin = evaluate_F(s, {1.0, 0.0}).W;
  const auto dbl = solve_real(s, fmin);
  EXPECT_TRUE(dbl.double_root);
  ASSERT_EQ(dbl.roots.size(), 1u);
  EXPECT_EQ(dbl.roots[0], 1.0);

  const auto area = solve_real(s, 4 * kPi);
  ASSERT_EQ(area.roots.size(), 2u);
  EXPECT_NEAR(area.roots[0], 0.0, 1e-9);
  EXPECT_NEAR(area.roots[1], 2.0, 1e-9);

  const auto trip = solve_real(s, evaluate_F(s, {1.7, 0.0}).W);
  EXPECT_NEAR(trip.roots[0], 0.3, 1e-9);
  EXPECT_NEAR(trip.roots[1], 1.7, 1e-9);

  EXPECT_THROW(solve_real(s, 0.9 * fmin), NoSolutionError);
}

TEST(SolveReal, ForwardResidualAndSymmetry) {
  for (int k : {1, 2, 3, 5}) {
    for (double r : {0.1, 0.5, 0.9, 1.5, 10.0}) {
      const auto s = SphereSetup::make(k, 1.0, r);
      for (double lambda : {0.5 * k + 0.2, 0.5 * k + 2.5, -3.0}) {
        const double nu = evaluate_F(s, {lambda, 0.0}).W;
        const auto roots = solve_real(s, nu);
        ASSERT_EQ(roots.roots.size(), 2u);
        EXPECT_EQ(roots.roots[0] + roots.roots[1], static_cast<double>(k));
        for (double x : roots.roots) EXPECT_LE(std::abs(evaluate_F(s, {x, 0.0}).W - nu), 1e-9 * nu);
      }
    }
  }
}

TEST(SignMap, Examples) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const double p = s.strip_halfwidth().value();
  const auto grid = sign_map_I(s, {-1.0, 3.0, 9, -p, p, 9});
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(grid.at(i, 4), 0) << "zeta = 0 row";
    EXPECT_EQ(grid.at(4, i), 0) << "xi = k/2 column";
  }
  const auto probe = sign_map_I(s, {-0.5, 2.5, 2, 0.5 * p, 0.5 * p, 1});
  EXPECT_EQ(probe.at(0, 0), -1);
  EXPECT_EQ(probe.at(1, 0), 1);
  EXPECT_THROW(sign_map_I(s, {0.0, 1.0, 3, -2 * p, p, 3}), DomainError);
}

TEST(SignMap, Antisymmetry) {
  for (int k : {1, 2, 3}) {
    const auto s = SphereSetup::make(k, 1.0, 0.7);
    const double p = s.strip_halfwidth().value();
    const int n = 11;
    const auto g = sign_map_I(s, {0.5 * k - 2.0, 0.5 * k + 2.0, n, -p, p, n});
    int nonzero = 0;
    for (int ix = 0; ix < n; ++ix) {
      for (int iz = 0; iz < n; ++iz) {
        const int v = g.at(ix, iz);
        if (v == 0) {
          EXPECT_TRUE(ix == n / 2 || iz == n / 2) << ix << "," << iz;
          continue;
        }
        ++nonzero;
        EXPECT_EQ(v, -g.at(n - 1 - ix, iz));
        EXPECT_EQ(v, -g.at(ix, n - 1 - iz));
        EXPECT_EQ(v, (g.xi[ix] > 0.5 * k) == (g.zeta[iz] > 0) ? 1 : -1);
      }
    }
    EXPECT_EQ(nonzero, (n - 1) * (n - 1));
  }
}

TEST(Picard, RealBetaReturnsThePair) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  PicardOptions opt;
  opt.starts = 4;
  const auto res = picard_search(s, {1.7, 0.0}, 2.0, opt);
  ASSERT_GE(res.roots.size(), 2u);
  EXPECT_EQ(res.roots[0].kind, RootKind::given);
  EXPECT_EQ(res.roots[0].alpha, (ComplexExponent{1.7, 0.0}));
  EXPECT_EQ(res.roots[1].kind, RootKind::reflected);
  EXPECT_NEAR(res.roots[1].alpha.xi, 0.3, 1e-15);
  EXPECT_LE(res.roots[1].residual, 1e-10 * std::abs(res.F_beta));
}

TEST(Picard, SelfReflectiveBeta) {
  const auto s = SphereSetup::make(3, 1.0, 0.4);
  PicardOptions opt;
  opt.starts = 4;
  const auto res = picard_search(s, {1.5, 0.0}, 1.0, opt);
  const auto given = std::count_if(res.roots.begin(), res.roots.end(),
                                   [](const PicardRoot& r) { return r.kind != RootKind::extra; });
  EXPECT_EQ(given, 1);
  EXPECT_EQ(res.roots[0].alpha.xi, 1.5);
}

TEST(Picard, ExtraRootsSolveTheEquation) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  const auto res = picard_search(s, {1.0, 0.0}, 40.0);
  const double target = std::abs(res.F_beta);
  EXPECT_NEAR(target, 3 * kPi * std::log(3.0), 1e-10);
  for (std::size_t i = 0; i < res.roots.size(); ++i) {
    const auto& r = res.roots[i];
    EXPECT_LE(r.residual, 1e-6 * target);
    // the closed form gives an independent check of every root
    EXPECT_LE(std::abs(oracle::k2_transform(1.0, 0.5, r.alpha.value()) - res.F_beta), 1e-6 * target);
    EXPECT_LE(std::abs(r.alpha.value() - 1.0), 40.0 * (1 + 1e-12));
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(std::abs(r.alpha.value() - res.roots[j].alpha.value()), 1e-6);
  }
}

TEST(Picard, RejectsBadArguments) {
  const auto s = SphereSetup::make(2, 1.0, 0.5);
  EXPECT_THROW(picard_search(s, {1.0, 0.0}, 0.0), DomainError);
}
