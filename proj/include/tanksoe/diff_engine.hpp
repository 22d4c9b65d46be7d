#ifndef TANKSOE_DIFF_ENGINE_HPP
#define TANKSOE_DIFF_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "system.hpp"

namespace tanksoe {

struct DerivativeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HessianEntry {
  int j, k;  // j <= k, stacked coordinates
  double v;
};

struct DerivativeBundle {
  Eigen::MatrixXd Jm, J0, Jp, Je;
  std::vector<double> steps;
  int flagged = 0;
  double richardson_max = 0.0;  // largest relative disagreement found
  // second order, one sparse list per equation
  std::vector<std::vector<HessianEntry>> H;
  double max_asymmetry = 0.0;
  bool has_hessian = false;

  Eigen::MatrixXd J() const
  {
    Eigen::MatrixXd out(Jm.rows(), Jm.cols() * 3 + Je.cols());
    out << Jm, J0, Jp, Je;
    return out;
  }
};

struct DiffOptions {
  bool abort_on_flag = true;
  double flag_tol = 1e-5;
  double asymmetry_tol = 1e-7;
  int workers = 1;
};

namespace detail {

inline double jac_step(long double x) { return std::max(1e-6, 1e-7 * std::fabs(static_cast<double>(x))); }
inline double hess_step(long double x) { return std::max(2e-5, 2e-5 * std::fabs(static_cast<double>(x))); }

inline bool all_finite(const std::vector<long double>& v)
{
  for (auto a : v)
    if (!std::isfinite(static_cast<double>(a))) return false;
  return true;
}

}  // namespace detail

// Central difference of f along coordinate j with step h.
inline std::vector<long double> central_column(const DynamicSystem& sys, std::vector<long double> x,
                                               int j, long double h)
{
  const int n = sys.n;
  std::vector<long double> fp(n), fm(n), out(n);
  const long double x0 = x[j];
  x[j] = x0 + h;
  sys.f(x.data(), fp.data());
  x[j] = x0 - h;
  sys.f(x.data(), fm.data());
  for (int i = 0; i < n; ++i) out[i] = (fp[i] - fm[i]) / (2 * h);
  return out;
}

inline DerivativeBundle jacobians(const DynamicSystem& sys, const DiffOptions& opt = {})
{
  const int n = sys.n, N = sys.nx();
  const auto x = sys.point();
  Eigen::MatrixXd J(n, N);
  DerivativeBundle d;
  d.steps.resize(N);
  std::vector<int> flags(N, 0);
  std::vector<double> worst(N, 0.0);
  parallel_for(N, opt.workers, [&](int j) {
    long double h = detail::jac_step(x[j]);
    for (int attempt = 0;; ++attempt) {
      auto d1 = central_column(sys, x, j, h);
      auto d2 = central_column(sys, x, j, 2 * h);
      if (detail::all_finite(d1) && detail::all_finite(d2)) {
        for (int i = 0; i < n; ++i) {
          const long double rich = (4 * d1[i] - d2[i]) / 3;
          const double rel = static_cast<double>(std::fabs(d1[i] - rich) /
                                                 std::max<long double>(1.0L, std::fabs(rich)));
          worst[j] = std::max(worst[j], rel);
          if (rel > opt.flag_tol) flags[j]++;
          J(i, j) = static_cast<double>(rich);
        }
        d.steps[j] = static_cast<double>(h);
        return;
      }
      if (attempt == 3)
        throw DerivativeError("non-finite derivative along coordinate " + std::to_string(j));
      h /= 10;
    }
  });
  for (int j = 0; j < N; ++j) {
    d.flagged += flags[j];
    d.richardson_max = std::max(d.richardson_max, worst[j]);
  }
  if (d.flagged > 0 && opt.abort_on_flag)
    throw DerivativeError(std::to_string(d.flagged) + " Jacobian entries failed the Richardson check");
  d.Jm = J.leftCols(n);
  d.J0 = J.middleCols(n, n);
  d.Jp = J.middleCols(2 * n, n);
  d.Je = J.rightCols(sys.ne);
  return d;
}

// Coordinates each equation depends on, detected by perturbing a generic point.
inline std::vector<std::vector<int>> incidence(const DynamicSystem& sys)
{
  const int n = sys.n, N = sys.nx();
  auto x = sys.point();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.01, 0.01);
  for (int j = 0; j < N; ++j) x[j] += (std::fabs(static_cast<double>(x[j])) + 0.01) * U(rng);
  std::vector<long double> f0(n), f1(n);
  sys.f(x.data(), f0.data());
  std::vector<std::vector<int>> inc(n);
  for (int j = 0; j < N; ++j) {
    const long double x0 = x[j];
    x[j] = x0 + 1e-3L * (std::fabs(x0) + 0.1L);
    sys.f(x.data(), f1.data());
    x[j] = x0;
    for (int i = 0; i < n; ++i)
      if (f1[i] != f0[i]) inc[i].push_back(j);
  }
  return inc;
}

inline void hessians(const DynamicSystem& sys, DerivativeBundle& d, const DiffOptions& opt = {})
{
  const int n = sys.n, N = sys.nx();
  const auto x = sys.point();
  const auto inc = incidence(sys);

  std::vector<std::vector<char>> pair(N, std::vector<char>(N, 0));
  for (const auto& row : inc)
    for (int a : row)
      for (int b : row) pair[a][b] = 1;
  std::vector<std::pair<int, int>> work;
  for (int j = 0; j < N; ++j)
    for (int k = j; k < N; ++k)
      if (pair[j][k]) work.emplace_back(j, k);

  std::vector<std::vector<double>> val(work.size(), std::vector<double>(n, 0.0));
  std::vector<double> asym(work.size(), 0.0);
  parallel_for(static_cast<int>(work.size()), opt.workers, [&](int w) {
    auto [j, k] = work[w];
    std::vector<long double> xx = x;
    if (j == k) {
      const long double h = detail::hess_step(x[j]);
      std::vector<long double> f0(n), a(n), b(n), c(n), e(n);
      sys.f(xx.data(), f0.data());
      auto at = [&](long double step, std::vector<long double>& out) {
        xx[j] = x[j] + step;
        sys.f(xx.data(), out.data());
      };
      at(h, a);
      at(-h, b);
      at(2 * h, c);
      at(-2 * h, e);
      for (int i = 0; i < n; ++i) {
        const long double d1 = (a[i] - 2 * f0[i] + b[i]) / (h * h);
        const long double d2 = (c[i] - 2 * f0[i] + e[i]) / (4 * h * h);
        val[w][i] = static_cast<double>((4 * d1 - d2) / 3);
      }
      return;
    }
    // cross partials with Richardson extrapolation; the two orders use swapped step sizes
    auto cross = [&](long double hj, long double hk) {
      std::vector<long double> out(n, 0.0L), tmp(n);
      const int sg[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      for (const auto& q : sg) {
        std::vector<long double> xq = x;
        xq[j] += q[0] * hj;
        xq[k] += q[1] * hk;
        sys.f(xq.data(), tmp.data());
        for (int i = 0; i < n; ++i) out[i] += q[2] * tmp[i];
      }
      for (int i = 0; i < n; ++i) out[i] /= 4 * hj * hk;
      return out;
    };
    auto nested = [&](int small, int large) {
      const long double hs = detail::hess_step(x[small]) / 2, hl = detail::hess_step(x[large]);
      const long double hj = small == j ? hs : hl, hk = small == k ? hs : hl;
      auto d1 = cross(hj, hk);
      auto d2 = cross(2 * hj, 2 * hk);
      std::vector<long double> out(n);
      for (int i = 0; i < n; ++i) out[i] = (4 * d1[i] - d2[i]) / 3;
      return out;
    };
    auto h1 = nested(j, k);
    auto h2 = nested(k, j);
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(h1[i]), v = static_cast<double>(h2[i]);
      asym[w] = std::max(asym[w], std::fabs(u - v) / std::max(1.0, std::fabs(u)));
      val[w][i] = 0.5 * (u + v);
    }
  });

  d.H.assign(n, {});
  d.max_asymmetry = 0.0;
  std::vector<std::vector<char>> member(n, std::vector<char>(N, 0));
  for (int i = 0; i < n; ++i)
    for (int a : inc[i]) member[i][a] = 1;
  for (size_t w = 0; w < work.size(); ++w) {
    d.max_asymmetry = std::max(d.max_asymmetry, asym[w]);
    auto [j, k] = work[w];
    for (int i = 0; i < n; ++i) {
      if (!member[i][j] || !member[i][k]) continue;
      const double v = val[w][i];
      if (!std::isfinite(v)) throw DerivativeError("non-finite second derivative");
      if (v != 0.0) d.H[i].push_back({j, k, v});
    }
  }
  if (opt.abort_on_flag && d.max_asymmetry > opt.asymmetry_tol)
    throw DerivativeError("Hessian asymmetry " + std::to_string(d.max_asymmetry) + " exceeds tolerance");
  d.has_hessian = true;
}

inline DerivativeBundle derivatives(const DynamicSystem& sys, const DiffOptions& opt = {})
{
  auto d = jacobians(sys, opt);
  hessians(sys, d, opt);
  return d;
}

}  // namespace tanksoe

#endif
