#ifndef TANKSOE_SIMULATION_HPP
#define TANKSOE_SIMULATION_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solution.hpp"

namespace tanksoe {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownShock : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline double to_reported(Unit u, double dev, double level)
{
  switch (u) {
    case Unit::percent: return 100.0 * dev / level;
    case Unit::annualized: return 400.0 * dev / level;
    case Unit::annualized_level: return 400.0 * dev;
    case Unit::log_percent: return 100.0 * dev;
    case Unit::level: return dev;
  }
  return dev;
}

// Read-only view of a perturbation solution.
struct Policy {
  const DynamicSystem* sys;
  const FirstOrderSolution* first;
  const SecondOrderSolution* second = nullptr;  // null for first order

  static Policy of(const Solution& s, int order)
  {
    Policy p{&s.sys, &s.first, nullptr};
    if (order >= 2) {
      if (!s.second) throw SimulationError("second-order solution not available");
      p.second = &*s.second;
    }
    return p;
  }
  int n() const { return first->n; }
};

// Runs the (pruned) state space forward from the steady state. eps is T x ne.
// cb(t, y) receives the level of every variable.
template <class Callback>
void simulate_path(const Policy& pol, const Eigen::MatrixXd& eps, Callback&& cb, bool pruned = true)
{
  using Eigen::VectorXd;
  const auto& f = *pol.first;
  const int n = f.n, ns = f.ns, ne = f.ne, nv = ns + ne;
  const VectorXd ybar = Eigen::Map<const VectorXd>(pol.sys->ss.data(), n);
  const Eigen::MatrixXd SG = f.S * f.G, SH = f.S * f.H;
  VectorXd xf = VectorXd::Zero(ns), xs = VectorXd::Zero(ns);
  VectorXd yf(n), ys = VectorXd::Zero(n), y(n), v(nv), kv(nv * nv);
  const Eigen::VectorXd half_gss = pol.second ? Eigen::VectorXd(0.5 * pol.second->gss) : VectorXd::Zero(n);
  for (int t = 0; t < eps.rows(); ++t) {
    const VectorXd e = eps.row(t).transpose();
    if (!pol.second) {
      yf = f.G * xf + f.H * e;
      y = ybar + yf;
      xf = f.S * yf;
    } else if (pruned) {
      v << xf, e;
      for (int a = 0; a < nv; ++a) kv.segment(a * nv, nv) = v(a) * v;
      yf = f.G * xf + f.H * e;
      ys = f.G * xs + 0.5 * (pol.second->gvv * kv) + half_gss;
      y = ybar + yf;
      y += ys;
      xf = f.S * yf;
      xs = f.S * ys;
    } else {
      v << xf, e;
      for (int a = 0; a < nv; ++a) kv.segment(a * nv, nv) = v(a) * v;
      yf = f.G * xf + f.H * e + 0.5 * (pol.second->gvv * kv) + half_gss;
      y = ybar + yf;
      xf = f.S * yf;
    }
    for (int i = 0; i < n; ++i)
      if (!(std::fabs(y(i) - ybar(i)) < 1e10)) throw SimulationError("explosive path at t=" + std::to_string(t));
    cb(t, y);
  }
}

inline Eigen::MatrixXd simulate_levels(const Policy& pol, const Eigen::MatrixXd& eps, bool pruned = true)
{
  Eigen::MatrixXd out(eps.rows(), pol.n());
  simulate_path(pol, eps, [&](int t, const Eigen::VectorXd& y) { out.row(t) = y.transpose(); }, pruned);
  return out;
}

inline Eigen::MatrixXd shock_loading(const Eigen::MatrixXd& Sigma)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sigma);
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal();
}

inline Eigen::MatrixXd draw_innovations(const Eigen::MatrixXd& Sigma, int T, std::uint64_t seed)
{
  const int ne = static_cast<int>(Sigma.rows());
  const Eigen::MatrixXd L = shock_loading(Sigma);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  Eigen::MatrixXd z(T, ne);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < ne; ++j) z(t, j) = N01(rng);
  return z * L.transpose();
}

struct ImpulseResponse {
  std::string shock;
  double size_sigma = 1.0;
  int order = 1;
  int horizon = 20;
  std::vector<std::string> names;
  Eigen::MatrixXd dev;       // horizon x n, level deviations
  Eigen::MatrixXd reported;  // horizon x n, reporting units

  int var(const std::string& nm) const
  {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == nm) return static_cast<int>(i);
    throw std::invalid_argument("unknown variable " + nm);
  }
  double peak_abs(int v) const { return reported.col(v).cwiseAbs().maxCoeff(); }
};

inline int shock_index(const DynamicSystem& sys, const std::string& name)
{
  for (size_t i = 0; i < sys.shocks.size(); ++i)
    if (sys.shocks[i] == name) return static_cast<int>(i);
  throw UnknownShock("unknown shock " + name);
}

inline ImpulseResponse impulse_response(const Policy& pol, int shock, double size_sigma, int horizon)
{
  const auto& sys = *pol.sys;
  const auto& f = *pol.first;
  const int n = f.n;
  if (shock < 0 || shock >= f.ne) throw UnknownShock("shock index out of range");
  ImpulseResponse ir;
  ir.shock = sys.shocks.empty() ? std::to_string(shock) : sys.shocks[shock];
  ir.size_sigma = size_sigma;
  ir.order = pol.second ? 2 : 1;
  ir.horizon = horizon;
  ir.names = sys.names;
  ir.dev = Eigen::MatrixXd::Zero(horizon, n);
  const double impulse = size_sigma * std::sqrt(sys.Sigma(shock, shock));
  if (!pol.second) {
    Eigen::VectorXd yv = f.H.col(shock) * impulse;
    const Eigen::MatrixXd T = f.G * f.S;
    for (int t = 0; t < horizon; ++t) {
      ir.dev.row(t) = yv.transpose();
      yv = T * yv;
    }
  } else {
    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(horizon, f.ne);
    const Eigen::MatrixXd base = simulate_levels(pol, eps);
    if (horizon > 0) eps(0, shock) = impulse;
    ir.dev = simulate_levels(pol, eps) - base;
  }
  ir.reported = ir.dev;
  if (!sys.units.empty())
    for (int v = 0; v < n; ++v)
      for (int t = 0; t < horizon; ++t) ir.reported(t, v) = to_reported(sys.units[v], ir.dev(t, v), sys.ss[v]);
  return ir;
}

inline ImpulseResponse impulse_response(const Solution& s, const std::string& shock, double size_sigma,
                                        int horizon, int order)
{
  return impulse_response(Policy::of(s, order), shock_index(s.sys, shock), size_sigma, horizon);
}

struct IrfComparison {
  ImpulseResponse a, b;
  std::vector<double> ratio;  // peak |a| / peak |b| per variable
};

inline IrfComparison compare_irf(const ModelParameters& pa, const ModelParameters& pb, const std::string& shock,
                                 double size_sigma, int horizon, int order, const DiffOptions& opt = {})
{
  const Solution sa = solve_model(pa, order, opt);
  const Solution sb = solve_model(pb, order, opt);
  IrfComparison c{impulse_response(sa, shock, size_sigma, horizon, order),
                  impulse_response(sb, shock, size_sigma, horizon, order), {}};
  for (int v = 0; v < c.a.dev.cols(); ++v) {
    const double A = c.a.peak_abs(v), B = c.b.peak_abs(v);
    c.ratio.push_back(A == B ? 1.0 : A / B);
  }
  return c;
}

// Stationary variance of the first-order state vector x = S y.
inline Eigen::MatrixXd state_variance(const FirstOrderSolution& f, const Eigen::MatrixXd& Sigma)
{
  const int ns = f.ns;
  const Eigen::MatrixXd A = f.S * f.G, B = f.S * f.H;
  const Eigen::MatrixXd C = B * Sigma * B.transpose();
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(ns * ns, ns * ns);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) K.block(i * ns, j * ns, ns, ns) -= A(i, j) * A;
  const Eigen::VectorXd vc = Eigen::Map<const Eigen::VectorXd>(C.data(), ns * ns);
  Eigen::VectorXd vx = K.partialPivLu().solve(vc);
  Eigen::MatrixXd X = Eigen::Map<Eigen::MatrixXd>(vx.data(), ns, ns);
  return 0.5 * (X + X.transpose());
}

// Var of v = [x_{t-1}; eps_t]
inline Eigen::MatrixXd v_variance(const FirstOrderSolution& f, const Eigen::MatrixXd& Sigma)
{
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(f.ns + f.ne, f.ns + f.ne);
  V.topLeftCorner(f.ns, f.ns) = state_variance(f, Sigma);
  V.bottomRightCorner(f.ne, f.ne) = Sigma;
  return V;
}

inline Eigen::MatrixXd first_order_variance(const FirstOrderSolution& f, const Eigen::MatrixXd& Sigma)
{
  const Eigen::MatrixXd gv = f.gv();
  return gv * v_variance(f, Sigma) * gv.transpose();
}

// Ergodic mean of the second-order (pruned) deviation.
inline Eigen::VectorXd second_order_mean(const SecondOrderSolution& s)
{
  const auto& f = s.first;
  const int n = f.n, nv = s.nv();
  const Eigen::MatrixXd V = v_variance(f, s.Sigma);
  Eigen::VectorXd kv(nv * nv);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) kv(a * nv + b) = V(a, b);
  const Eigen::VectorXd c = 0.5 * (s.gvv * kv) + 0.5 * s.gss;
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - f.G * f.S;
  return M.partialPivLu().solve(c);
}

struct MomentTable {
  std::vector<std::string> names;
  Eigen::VectorXd mean_dev, std_dev;
  Eigen::VectorXd mean_se, std_se;  // batch-means standard errors
  int periods = 0, burn_in = 0;
  std::uint64_t seed = 0;
  int order = 2;
};

// Batch-means standard error of the mean of a serially correlated series.
inline double batch_se(const std::vector<double>& x, int batches = 50)
{
  const int T = static_cast<int>(x.size()), L = T / batches;
  if (L < 2) return NAN;
  std::vector<double> m(batches, 0.0);
  double tot = 0.0;
  for (int b = 0; b < batches; ++b) {
    for (int t = b * L; t < (b + 1) * L; ++t) m[b] += x[t];
    m[b] /= L;
    tot += m[b];
  }
  tot /= batches;
  double v = 0.0;
  for (double a : m) v += (a - tot) * (a - tot);
  v /= (batches - 1);
  return std::sqrt(v / batches);
}

inline MomentTable simulate_moments(const Policy& pol, int periods, int burn_in, std::uint64_t seed,
                                    bool pruned = true)
{
  if (periods <= burn_in) throw std::invalid_argument("periods must exceed burn-in");
  const auto& sys = *pol.sys;
  const int n = pol.n(), keep = periods - burn_in;
  const Eigen::MatrixXd eps = draw_innovations(sys.Sigma, periods, seed);
  std::vector<std::vector<double>> dev(n, std::vector<double>(keep));
  simulate_path(pol, eps, [&](int t, const Eigen::VectorXd& y) {
    if (t < burn_in) return;
    for (int i = 0; i < n; ++i) dev[i][t - burn_in] = y(i) - sys.ss[i];
  }, pruned);
  MomentTable m;
  m.names = sys.names;
  m.periods = periods;
  m.burn_in = burn_in;
  m.seed = seed;
  m.order = pol.second ? 2 : 1;
  m.mean_dev.resize(n);
  m.std_dev.resize(n);
  m.mean_se.resize(n);
  m.std_se.resize(n);
  for (int i = 0; i < n; ++i) {
    double mu = 0.0;
    for (double a : dev[i]) mu += a;
    mu /= keep;
    std::vector<double> sq(keep);
    double var = 0.0;
    for (int t = 0; t < keep; ++t) {
      sq[t] = (dev[i][t] - mu) * (dev[i][t] - mu);
      var += sq[t];
    }
    var /= keep;
    m.mean_dev(i) = mu;
    m.std_dev(i) = std::sqrt(var);
    m.mean_se(i) = batch_se(dev[i]);
    m.std_se(i) = var > 0 ? batch_se(sq) / (2 * std::sqrt(var)) : 0.0;
  }
  return m;
}

}  // namespace tanksoe

#endif
