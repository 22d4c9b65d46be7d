#include <gtest/gtest.h>

#include "support.hpp"

using namespace tanksoe;
using tanksoe::testing::benchmark;

TEST(Simulation, ZeroShockGivesZeroResponse)
{
  const auto& s = benchmark();
  for (int order : {1, 2}) {
    const auto ir = impulse_response(s, "eps_R", 0.0, 20, order);
    EXPECT_EQ(ir.dev.rows(), 20);
    if (order == 1) EXPECT_EQ(ir.dev.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(ir.dev.row(0).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Simulation, FirstOrderMatchesMatrixPowers)
{
  const auto& s = benchmark();
  const auto ir = impulse_response(s, "eps_Rstar", 1.0, 12, 1);
  const Eigen::MatrixXd T = s.first.T();
  Eigen::VectorXd y = s.first.H.col(shock::eps_Rstar) * std::sqrt(s.sys.Sigma(shock::eps_Rstar, shock::eps_Rstar));
  for (int t = 0; t < 12; ++t) {
    const double tol = 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff());
    EXPECT_LT((ir.dev.row(t).transpose() - y).cwiseAbs().maxCoeff(), tol) << t;
    y = T * y;
  }
}

TEST(Simulation, OddInShockSignAtFirstOrder)
{
  const auto& s = benchmark();
  for (const char* sh : {"eps_P", "eps_Rstar", "eps_R"}) {
    const auto up = impulse_response(s, sh, 1.0, 20, 1), dn = impulse_response(s, sh, -1.0, 20, 1);
    EXPECT_EQ((up.dev + dn.dev).cwiseAbs().maxCoeff(), 0.0) << sh;
  }
  const auto up = impulse_response(s, "eps_P", 1.0, 20, 2), dn = impulse_response(s, "eps_P", -1.0, 20, 2);
  const Eigen::MatrixXd even = 0.5 * (up.dev + dn.dev);
  const auto up2 = impulse_response(s, "eps_P", 1.0, 20, 2), dn2 = impulse_response(s, "eps_P", -1.0, 20, 2);
  EXPECT_EQ((even - 0.5 * (up2.dev + dn2.dev)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(even.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Simulation, ResponsesDecay)
{
  const auto& s = benchmark();
  for (int order : {1, 2})
    for (const char* sh : {"eps_P", "eps_Rstar", "eps_R"}) {
      const auto ir = impulse_response(s, sh, 1.0, 121, order);
      for (int v = 0; v < n_vars; ++v) {
        const double peak = ir.dev.col(v).cwiseAbs().maxCoeff();
        if (peak < 1e-10 * std::max(1.0, std::fabs(s.sys.ss[v]))) continue;
        const double tail = ir.dev.col(v).segment(80, 41).cwiseAbs().maxCoeff();
        EXPECT_LT(tail, 0.01 * peak) << sh << " " << var_names[v] << " order " << order;
      }
    }
}

TEST(Simulation, ZeroedHessianReproducesFirstOrderBitwise)
{
  const auto& s = benchmark();
  SecondOrderSolution z = *s.second;
  z.gvv.setZero();
  z.gss.setZero();
  const Policy p1 = Policy::of(s, 1);
  const Policy p2{&s.sys, &s.first, &z};
  const auto eps = draw_innovations(s.sys.Sigma, 500, 99);
  const auto a = simulate_levels(p1, eps), b = simulate_levels(p2, eps);
  EXPECT_TRUE((a.array() == b.array()).all());
}

TEST(Simulation, DeterministicGivenSeed)
{
  const auto& s = benchmark();
  const auto a = simulate_moments(Policy::of(s, 2), 3000, 100, 7);
  const auto b = simulate_moments(Policy::of(s, 2), 3000, 100, 7);
  EXPECT_TRUE((a.mean_dev.array() == b.mean_dev.array()).all());
  EXPECT_TRUE((a.std_dev.array() == b.std_dev.array()).all());
  EXPECT_TRUE((a.std_dev.array() >= 0).all());
  const auto c = simulate_moments(Policy::of(s, 2), 3000, 100, 8);
  EXPECT_FALSE((a.mean_dev.array() == c.mean_dev.array()).all());
}

TEST(Simulation, ZeroVarianceGivesZeroMoments)
{
  auto p = build_benchmark_parameters();
  for (auto* sd : {&p.sigma_Pco, &p.sigma_Rstar, &p.sigma_R, &p.sigma_yCo, &p.sigma_A}) *sd = 0.0;
  const auto s = solve_model(p, 2);
  const auto m = simulate_moments(Policy::of(s, 2), 500, 50, 1);
  EXPECT_EQ(m.std_dev.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.mean_dev.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(second_order_mean(*s.second).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Simulation, FirstOrderStdMatchesLyapunov)
{
  const auto& s = benchmark();
  const auto V = first_order_variance(s.first, s.sys.Sigma);
  const auto m = simulate_moments(Policy::of(s, 1), 100000, 1000, 2024);
  int checked = 0;
  for (int v = 0; v < n_vars; ++v) {
    const double sd = std::sqrt(std::max(0.0, V(v, v)));
    if (sd < 1e-6 * std::max(1.0, std::fabs(s.sys.ss[v]))) continue;
    EXPECT_LE(std::fabs(m.std_dev(v) - sd), 3 * m.std_se(v)) << var_names[v];
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(Simulation, SecondOrderMeanMatchesSimulation)
{
  const auto& s = benchmark();
  const auto mu = second_order_mean(*s.second);
  const auto m = simulate_moments(Policy::of(s, 2), 100000, 1000, 31);
  for (int v : {var::cR, var::cH, var::y, var::VR, var::VH})
    EXPECT_LE(std::fabs(m.mean_dev(v) - mu(v)), 4 * m.mean_se(v)) << var_names[v];
}

TEST(Simulation, CompareIdenticalParametersGivesUnitRatios)
{
  const auto p = build_benchmark_parameters();
  const auto c = compare_irf(p, p, "eps_P", 1.0, 20, 1);
  for (double r : c.ratio) EXPECT_EQ(r, 1.0);
}

TEST(Simulation, UnknownShockRejected)
{
  EXPECT_THROW(impulse_response(benchmark(), "eps_X", 1.0, 20, 1), UnknownShock);
}

TEST(Simulation, ReportingUnits)
{
  EXPECT_NEAR(to_reported(Unit::percent, 0.02, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(to_reported(Unit::annualized, 0.0025, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(to_reported(Unit::annualized_level, 0.0025, 0.007), 1.0, 1e-15);
  EXPECT_NEAR(to_reported(Unit::log_percent, 0.01, 0.0), 1.0, 1e-15);
  EXPECT_EQ(to_reported(Unit::level, 0.3, 5.0), 0.3);
}
