#include <gtest/gtest.h>

#include <random>

#include "incentive/qg_games.hpp"

using namespace incentive;
using namespace incentive::qg;

namespace {

QGParams fig4(double beta = 1.0, double kappa = 0.0) { return {beta, 1.0, 4.0, kappa}; }

}  // namespace

TEST(QGParams, Validation) {
  EXPECT_THROW(qg_g1({0.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(qg_g1({-1.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(qg_g1({1.0, 1.0, -1.0}), InputError);
  EXPECT_THROW(qg_g4_optimize({1.0, 1.0, 1.0, -0.5}), InputError);
  EXPECT_THROW(f_beta(0.0), InputError);
}

TEST(TeamSolution, Slopes) {
  auto [u1, v1] = qg_team_solution(fig4(1.0));
  EXPECT_DOUBLE_EQ(u1, 0.2);
  EXPECT_DOUBLE_EQ(v1, 0.4);
  auto [u2, v2] = qg_team_solution(fig4(0.5));
  EXPECT_NEAR(u2, 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(v2, 4.0 / 7.0, 1e-15);
  auto [u3, v3] = qg_team_solution(fig4(1e6));
  EXPECT_NEAR(u3, 1.0 / 3.0, 1e-5);
  EXPECT_NEAR(v3, 0.0, 1e-5);
}

TEST(QgG1, ClosedForm) {
  const auto r = qg_g1(fig4());
  EXPECT_NEAR(r.principal_cost, 2.0, 1e-12);
  EXPECT_NEAR(r.agent_cost, 1.6, 1e-12);
  EXPECT_DOUBLE_EQ(r.policy.q, 0.0);
  const auto zero = qg_g1({1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(zero.principal_cost, 0.0);
  EXPECT_DOUBLE_EQ(zero.agent_cost, 0.0);
}

// Under the full-information policy the agent's own optimum is v^t.
TEST(QgG1, PolicyInducesTeamAction) {
  for (double beta : {0.3, 1.0, 2.5}) {
    const auto pol = mean_feedback_policy(beta);
    const double theta = 1.7;
    const double a = pol.intercept_slope * theta, q = pol.q;
    const double v = (1.0 + q) * (theta - a) / ((1.0 + q) * (1.0 + q) + 1.0);
    EXPECT_NEAR(v, pol.vt_slope * theta, 1e-12);
    EXPECT_NEAR(a + q * v, pol.ut_slope * theta, 1e-12);
  }
}

TEST(QgG2, ClosedForm) {
  EXPECT_NEAR(qg_g2(fig4()).principal_cost, 2.4, 1e-12);
  EXPECT_NEAR(qg_g2(fig4()).agent_cost, 0.32 + 2.0, 1e-12);
  const QGParams p{1.3, 0.7, 0.0};
  EXPECT_NEAR(qg_g2(p).principal_cost, qg_g1(p).principal_cost, 1e-12);
  EXPECT_THROW(qg_g2(fig4(), 0.0, -1.0), InputError);
}

TEST(QgG2, PriceOfIgnoranceVanishesAtRootThreeMinusOne) {
  const QGParams p{std::sqrt(3.0) - 1.0, 0.4, 2.5};
  EXPECT_NEAR(qg_g2(p).principal_cost - qg_g1(p).principal_cost, 0.0, 1e-10);
}

TEST(QgG2, PriceOfIgnoranceNonnegative) {
  for (int i = 1; i <= 2000; ++i) {
    const QGParams p{20.0 * i / 2000.0, 1.0, 4.0};
    EXPECT_GE(qg_g2(p).principal_cost - qg_g1(p).principal_cost, -1e-12) << p.beta;
  }
}

TEST(QgG2, AgentResponseSatisfiesFirstOrderCondition) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0), b(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = b(rng), theta = u(rng), z = u(rng);
    const auto pol = mean_feedback_policy(beta);
    const double v = agent_response(beta, theta, z);
    auto cost = [&](double x) { return agent_cost(pol(x, z), x, theta); };
    const double h = 1e-3;  // central differences are exact on quadratics
    EXPECT_NEAR((cost(v + h) - cost(v - h)) / (2.0 * h), 0.0, 1e-9);
  }
}

TEST(FBeta, SignsAndLimits) {
  EXPECT_NEAR(f_beta(1.0), -0.18, 1e-12);
  EXPECT_NEAR(f_beta(0.5), 0.20816326530612245, 1e-12);
  EXPECT_NEAR(f_beta(1e-6), 1.0, 1e-4);
  EXPECT_NEAR(f_beta(1e6), -5.0 / 9.0, 1e-4);
}

TEST(QgG3, RevelationFollowsSignOfF) {
  const auto full = qg_g3(fig4(1.0));
  EXPECT_TRUE(full.revelation);
  EXPECT_DOUBLE_EQ(full.principal_cost, qg_g1(fig4(1.0)).principal_cost);
  const auto none = qg_g3(fig4(0.5));
  EXPECT_FALSE(none.revelation);
  EXPECT_DOUBLE_EQ(none.principal_cost, qg_g2(fig4(0.5)).principal_cost);
  EXPECT_FALSE(none.tie);
}

// The agent's cost through a channel is A f(beta) + J_A2(prior) with
// A = sigma0^4 / (sigma0^2 + sigma_w^2).
TEST(QgG3, AgentCostThroughChannel) {
  for (double beta : {0.5, 1.0, 3.0})
    for (double sw : {0.1, 1.0, 10.0}) {
      const auto p = fig4(beta);
      const double a = 16.0 / (4.0 + sw);
      EXPECT_NEAR(channel_costs(p, sw).second, a * f_beta(beta) + qg_g2(p).agent_cost, 1e-12);
    }
}

TEST(QgG4Cost, HandSubstitution) {
  EXPECT_NEAR(qg_g4_cost(fig4(1.0, 1.0), 4.0), 2.3115717756571049, 1e-10);
}

TEST(QgG4Cost, Limits) {
  const auto p = fig4(1.0, 1.0);
  EXPECT_NEAR(qg_g4_cost(p, 1e12), qg_g2(p).principal_cost, 1e-5);
  EXPECT_DOUBLE_EQ(qg_g4_cost(p, kNoChannel), qg_g2(p).principal_cost);
  EXPECT_TRUE(std::isinf(qg_g4_cost(p, 0.0)));
  EXPECT_GT(qg_g4_cost(p, 1e-300), 100.0);
}

TEST(QgG4Optimize, FreeInformation) {
  const auto r = qg_g4_optimize(fig4(1.0, 0.0));
  ASSERT_TRUE(r.channel.has_value());
  EXPECT_NEAR(*r.channel, kSweepLow, 1e-12);
  EXPECT_NEAR(r.principal_cost, qg_g1(fig4()).principal_cost, 1e-6);
}

TEST(QgG4Optimize, InteriorOptimaBeatNoAcquisition) {
  for (double beta : {0.5, 1.0})
    for (double kappa : {0.5, 2.0}) {
      const auto p = fig4(beta, kappa);
      const auto r = qg_g4_optimize(p);
      ASSERT_TRUE(r.channel.has_value());
      EXPECT_TRUE(std::isfinite(*r.channel));
      EXPECT_GT(*r.channel, 1e-3);
      EXPECT_LT(r.principal_cost, qg_g2(p).principal_cost);
    }
}

TEST(QgG4Optimize, ExpensiveInformationIsNotBought) {
  const auto r = qg_g4_optimize(fig4(1.0, 4.0));
  EXPECT_TRUE(std::isinf(*r.channel));
  EXPECT_DOUBLE_EQ(r.principal_cost, 2.4);
}

TEST(QgG4Optimize, NeverWorseThanAnyGridPoint) {
  for (double beta : {0.2, 0.5, 1.0, 3.0})
    for (double kappa : {0.0, 0.1, 0.5, 2.0, 8.0}) {
      const auto p = fig4(beta, kappa);
      const double best = qg_g4_optimize(p).principal_cost;
      EXPECT_LE(best, qg_g2(p).principal_cost + 1e-9);
      for (double s : sigma_w_sweep()) EXPECT_LE(best, qg_g4_cost(p, s) + 1e-9);
    }
}

TEST(GoldenSection, FindsParabolaMinimum) {
  const auto m = golden_section_minimize([](double x) { return (x - 1.234) * (x - 1.234); }, -5.0, 5.0, 1e-10);
  EXPECT_NEAR(m.x, 1.234, 1e-7);
}

TEST(PosteriorStats, Moments) {
  const auto s = posterior_stats(fig4(), 4.0);
  EXPECT_DOUBLE_EQ(s.zs_var, 2.0);
  EXPECT_DOUBLE_EQ(s.posterior_var, 2.0);
  EXPECT_DOUBLE_EQ(posterior_stats(fig4(), kNoChannel).posterior_var, 4.0);
  EXPECT_DOUBLE_EQ(posterior_stats(fig4(), 0.0).posterior_var, 0.0);
}
