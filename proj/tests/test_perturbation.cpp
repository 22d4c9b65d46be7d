#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

using namespace tanksoe;
using tanksoe::testing::scalar_system;
using tanksoe::testing::toy_system;

namespace {

double stable_root(double a, double b) { return (1 - std::sqrt(1 - 4 * a * b)) / (2 * a); }

}  // namespace

TEST(FirstOrder, ScalarStableRootGoldenCase)
{
  auto sys = scalar_system(1.0 / 3.0, 1.0 / 3.0);
  auto sol = solve_first_order(jacobians(sys), sys.states);
  EXPECT_NEAR(sol.G(0, 0), (3 - std::sqrt(5.0)) / 2, 1e-10);
  EXPECT_NEAR(sol.G(0, 0), 0.381966011250105, 1e-10);
  EXPECT_NEAR(sol.H(0, 0), 1 / (1 - (1.0 / 3.0) * sol.G(0, 0)), 1e-10);
}

TEST(FirstOrder, ScalarStableRootQuadraticFormula)
{
  for (auto [a, b] : {std::pair{0.5, 0.3}, std::pair{0.2, 0.7}, std::pair{0.9, 0.1}}) {
    auto sys = scalar_system(a, b);
    auto sol = solve_first_order(jacobians(sys), sys.states);
    EXPECT_NEAR(sol.G(0, 0), stable_root(a, b), 1e-10) << a << " " << b;
  }
  auto sys = scalar_system(0.5, 0.3);
  EXPECT_NEAR(solve_first_order(jacobians(sys), sys.states).G(0, 0), 0.36754446796632, 1e-10);
}

TEST(FirstOrder, StaticModel)
{
  auto sys = toy_system(2, 1, {}, {0.0, 0.0}, [](auto, auto y, auto, auto e, auto out) {
    out[0] = y[0] - 2 * e[0];
    out[1] = y[1] - y[0] + 0.5 * e[0];
  });
  auto sol = solve_first_order(jacobians(sys), sys.states);
  EXPECT_EQ(sol.ns, 0);
  EXPECT_NEAR(sol.H(0, 0), 2.0, 1e-10);
  EXPECT_NEAR(sol.H(1, 0), 1.5, 1e-10);
}

TEST(FirstOrder, IndeterminacyAndExplosiveness)
{
  // both roots inside the unit circle: too many stable roots
  auto sys = toy_system(1, 1, {0}, {0.0}, [](auto ym, auto y, auto yp, auto e, auto out) {
    out[0] = yp[0] - 0.9 * y[0] + 0.2 * ym[0] - e[0];
  });
  EXPECT_THROW(solve_first_order(jacobians(sys), sys.states), BKError);
  // both roots outside: no stable solution
  auto sys2 = toy_system(1, 1, {0}, {0.0}, [](auto ym, auto y, auto yp, auto e, auto out) {
    out[0] = yp[0] - 5 * y[0] + 6 * ym[0] - e[0];
  });
  EXPECT_THROW(solve_first_order(jacobians(sys2), sys2.states), BKError);
}

TEST(FirstOrder, BenchmarkSaddlePath)
{
  const auto& s = tanksoe::testing::benchmark();
  EXPECT_EQ(s.first.n_stable, s.first.ns);
  EXPECT_LT(s.first.lin_residual, 1e-8);
  EXPECT_LT(s.first.spectral_radius, 1.0);
}

TEST(FirstOrder, NoExchangeRateResponseBreaksDeterminacy)
{
  auto p = build_benchmark_parameters();
  p.phi_s = 0.0;
  EXPECT_THROW(solve_model(p, 1), BKError);
}

TEST(FirstOrder, InvariantToEquationOrder)
{
  const auto& s = tanksoe::testing::benchmark();
  auto sys = s.sys;
  std::vector<int> perm(sys.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 7, perm.end());
  auto inner = sys.f;
  const int n = sys.n;
  sys.f = [inner, perm, n](const long double* x, long double* out) {
    std::vector<long double> tmp(n);
    inner(x, tmp.data());
    for (int i = 0; i < n; ++i) out[i] = tmp[perm[i]];
  };
  auto sol = solve_first_order(jacobians(sys), sys.states);
  EXPECT_LT((sol.G - s.first.G).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((sol.H - s.first.H).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FirstOrder, MonetaryShockRedistributes)
{
  const auto& s = tanksoe::testing::benchmark();
  const double dcR = s.first.H(var::cR, shock::eps_R), dcH = s.first.H(var::cH, shock::eps_R);
  EXPECT_LT(dcR * dcH, 0.0) << "cR " << dcR << " cH " << dcH;
}

TEST(SecondOrder, LinearModelDegenerates)
{
  auto sys = toy_system(2, 1, {0}, {0.0, 1.0}, [](auto ym, auto y, auto yp, auto e, auto out) {
    out[0] = y[0] - 0.5 * yp[0] - 0.3 * ym[0] - e[0];
    out[1] = y[1] - 1.0 - 2 * y[0] + 0.1 * yp[1];
  });
  auto d = derivatives(sys);
  auto f = solve_first_order(d, sys.states);
  auto s2 = solve_second_order(d, f, sys.Sigma);
  EXPECT_LT(s2.gvv.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(s2.gss.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SecondOrder, ScalarQuadraticOracle)
{
  // y = b y_- + c y_-^2 + e  has gvv = 2c on the state, 0 elsewhere, gss = 0
  const double b = 0.6, c = 0.4;
  auto sys = toy_system(1, 1, {0}, {0.0}, [b, c](auto ym, auto y, auto, auto e, auto out) {
    out[0] = y[0] - b * ym[0] - c * ym[0] * ym[0] - e[0];
  });
  auto d = derivatives(sys);
  auto s2 = solve_second_order(d, solve_first_order(d, sys.states), sys.Sigma);
  EXPECT_NEAR(s2.gvv(0, 0), 2 * c, 1e-6);
  EXPECT_NEAR(s2.gvv(0, 1), 0.0, 1e-6);
  EXPECT_NEAR(s2.gvv(0, 3), 0.0, 1e-6);
  EXPECT_NEAR(s2.gss(0), 0.0, 1e-6);
}

TEST(SecondOrder, ForwardLookingVarianceCorrection)
{
  // y = E[x'^2] with x = e: gss = 2 sigma^2 (y = sigma^2 in the mean)
  const double sig2 = 0.09;
  Eigen::MatrixXd S(1, 1);
  S << sig2;
  auto sys = toy_system(2, 1, {}, {0.0, 0.0}, [](auto, auto y, auto yp, auto e, auto out) {
    out[0] = y[0] - yp[1] * yp[1];
    out[1] = y[1] - e[0];
  }, S);
  auto d = derivatives(sys);
  auto s2 = solve_second_order(d, solve_first_order(d, sys.states), sys.Sigma);
  EXPECT_NEAR(0.5 * s2.gss(0), sig2, 1e-6);
  EXPECT_NEAR(s2.gss(1), 0.0, 1e-6);
}

TEST(SecondOrder, ZeroVarianceAndCovarianceLinearity)
{
  const auto& s = tanksoe::testing::benchmark();
  const auto& s2 = *s.second;
  EXPECT_LT(s2.sylvester_residual, 1e-8);
  auto zero = solve_second_order(s.deriv, s.first, Eigen::MatrixXd::Zero(n_shocks, n_shocks));
  EXPECT_EQ(zero.gss.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((zero.gvv - s2.gvv).cwiseAbs().maxCoeff(), 0.0);
  auto dbl = solve_second_order(s.deriv, s.first, 4.0 * s.sys.Sigma);
  const double scale = std::max(1.0, s2.gss.cwiseAbs().maxCoeff());
  EXPECT_LT((dbl.gss - 4.0 * s2.gss).cwiseAbs().maxCoeff(), 1e-9 * scale);
  EXPECT_EQ((dbl.gvv - s2.gvv).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SecondOrder, GvvSymmetricInStates)
{
  const auto& s2 = *tanksoe::testing::benchmark().second;
  const int nv = s2.nv();
  double worst = 0.0;
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b)
      worst = std::max(worst, (s2.gvv.col(kron_index(a, b, nv)) - s2.gvv.col(kron_index(b, a, nv)))
                                  .cwiseAbs()
                                  .maxCoeff());
  EXPECT_EQ(worst, 0.0);
  EXPECT_TRUE(s2.gss.allFinite());
}

namespace {

// Euler-equation residual along the policy starting from state deviation dx, with eps = 0 and
// no uncertainty: y0 = g(x), y1 = g(S y0).
double policy_residual(const Solution& s, const Eigen::VectorXd& dx, bool second)
{
  const auto& f = s.first;
  const int n = f.n, ns = f.ns, ne = f.ne, nv = ns + ne;
  const Eigen::VectorXd ybar = Eigen::Map<const Eigen::VectorXd>(s.sys.ss.data(), n);
  auto g = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nv);
    v.head(ns) = x;
    Eigen::VectorXd y = f.G * x;
    if (second) {
      Eigen::VectorXd kv(nv * nv);
      for (int a = 0; a < nv; ++a) kv.segment(a * nv, nv) = v(a) * v;
      y += 0.5 * (s.second->gvv * kv);
    }
    return y;
  };
  Eigen::VectorXd ym = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < ns; ++i) ym(f.states[i]) = dx(i);
  const Eigen::VectorXd y0 = g(dx);
  const Eigen::VectorXd y1 = g(f.S * y0);
  std::vector<long double> x(3 * n + ne, 0.0L), out(n);
  for (int i = 0; i < n; ++i) {
    x[i] = ybar(i) + ym(i);
    x[n + i] = ybar(i) + y0(i);
    x[2 * n + i] = ybar(i) + y1(i);
  }
  s.sys.f(x.data(), out.data());
  double m = 0.0;
  for (auto r : out) m = std::max(m, std::fabs(static_cast<double>(r)));
  return m;
}

}  // namespace

TEST(SecondOrder, CubicTruncationScaling)
{
  auto p = build_benchmark_parameters();
  for (auto* sd : {&p.sigma_Pco, &p.sigma_Rstar, &p.sigma_R, &p.sigma_yCo, &p.sigma_A}) *sd = 0.0;
  const auto s = solve_model(p, 2);
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(s.first.ns);
  for (int i = 0; i < s.first.ns; ++i) dir(i) = s.sys.ss[s.first.states[i]] * (i % 2 ? 0.6 : -0.4);
  const double h = 0.02;
  const double r1 = policy_residual(s, h * dir, true);
  const double r2 = policy_residual(s, 0.5 * h * dir, true);
  const double ratio = r1 / r2;
  EXPECT_GE(ratio, 6.0) << r1 << " " << r2;
  EXPECT_LE(ratio, 10.0) << r1 << " " << r2;
  // first order is quadratic in the deviation
  const double q = policy_residual(s, h * dir, false) / policy_residual(s, 0.5 * h * dir, false);
  EXPECT_NEAR(q, 4.0, 1.0);
}
