#ifndef TANKSOE_WELFARE_HPP
#define TANKSOE_WELFARE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "simulation.hpp"

namespace tanksoe {

struct PolicyPoint {
  double tau_C = 0.0;
  double phi_s = 0.02;

  static constexpr double phi_s_min = 0.0002;

  PolicyPoint() = default;
  PolicyPoint(double tau, double phis) : tau_C(tau), phi_s(phis)
  {
    if (!(tau >= -1.0 && tau <= 1.0)) throw std::invalid_argument("tau_C outside [-1, 1]");
    if (!(phis >= phi_s_min)) throw std::invalid_argument("phi_s below 0.0002");
  }
  bool operator==(const PolicyPoint&) const = default;
};

enum Household { ricardian = 0, hand_to_mouth = 1 };

struct WelfareEval {
  PolicyPoint point;
  bool feasible = false;
  std::string error;
  double welfare[2] = {NAN, NAN};              // E[V^j], unconditional
  double welfare_conditional[2] = {NAN, NAN};  // V^j at the steady state, second order
  double c_mean[2] = {NAN, NAN};               // percent of steady-state level
  double l_mean[2] = {NAN, NAN};
  double c_std[2] = {NAN, NAN};  // percent of steady-state level, first-order
  double l_std[2] = {NAN, NAN};
};

struct WelfareOptions {
  bool conditional = false;  // rank by conditional instead of unconditional welfare
  DiffOptions diff;
};

inline double rank_value(const WelfareEval& e, int j, const WelfareOptions& o)
{
  return o.conditional ? e.welfare_conditional[j] : e.welfare[j];
}

// Evaluates a policy point using a steady state computed at any (tau_C, phi_s):
// neither coefficient moves the steady state.
inline WelfareEval evaluate_welfare(const SteadyState& base, const PolicyPoint& pt, const WelfareOptions& opt = {})
{
  using namespace var;
  WelfareEval ev;
  ev.point = pt;
  try {
    SteadyState ss = base;
    ss.model.p.tau_C = pt.tau_C;
    ss.model.p.phi_s = pt.phi_s;
    const DynamicSystem sys = make_system(ss);
    DerivativeBundle d = jacobians(sys, opt.diff);
    const FirstOrderSolution f = solve_first_order(d, sys.states);
    hessians(sys, d, opt.diff);
    const SecondOrderSolution so = solve_second_order(d, f, sys.Sigma);
    const Eigen::VectorXd m = second_order_mean(so);
    const Eigen::MatrixXd V = first_order_variance(f, sys.Sigma);
    const int cc[2] = {cR, cH}, ll[2] = {lR, lH}, vv[2] = {VR, VH};
    for (int j = 0; j < 2; ++j) {
      ev.welfare[j] = ss[vv[j]] + m(vv[j]);
      ev.welfare_conditional[j] = ss[vv[j]] + 0.5 * so.gss(vv[j]);
      ev.c_mean[j] = 100.0 * m(cc[j]) / ss[cc[j]];
      ev.l_mean[j] = 100.0 * m(ll[j]) / ss[ll[j]];
      ev.c_std[j] = 100.0 * std::sqrt(std::max(0.0, V(cc[j], cc[j]))) / ss[cc[j]];
      ev.l_std[j] = 100.0 * std::sqrt(std::max(0.0, V(ll[j], ll[j]))) / ss[ll[j]];
    }
    ev.feasible = std::isfinite(ev.welfare[0]) && std::isfinite(ev.welfare[1]);
    if (!ev.feasible) ev.error = "non-finite welfare";
  } catch (const std::exception& e) {
    ev.feasible = false;
    ev.error = e.what();
  }
  return ev;
}

inline WelfareEval evaluate_welfare(const ModelParameters& p, const WelfareOptions& opt = {})
{
  return evaluate_welfare(solve_steady_state(p), PolicyPoint(p.tau_C, p.phi_s), opt);
}

struct AllPointsInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PolicyGridResult {
  std::vector<WelfareEval> points;  // grid order
  WelfareEval benchmark;
  int argmax[2] = {-1, -1};
  bool conditional = false;

  const WelfareEval& best(int j) const { return points.at(argmax[j]); }
  double std_ratio_c(int j) const { return best(j).c_std[j] / benchmark.c_std[j]; }
  double std_ratio_l(int j) const { return best(j).l_std[j] / benchmark.l_std[j]; }
  double mean_change_c(int j) const { return best(j).c_mean[j] - benchmark.c_mean[j]; }
  double mean_change_l(int j) const { return best(j).l_mean[j] - benchmark.l_mean[j]; }
  double welfare_gain(int j) const
  {
    return conditional ? best(j).welfare_conditional[j] - benchmark.welfare_conditional[j]
                       : best(j).welfare[j] - benchmark.welfare[j];
  }
};

inline std::vector<double> default_tau_grid() { return {-1.0, -0.5, 0.0, 0.5, 1.0}; }

inline std::vector<double> default_phis_grid()
{
  std::vector<double> g;
  const double lo = std::log(0.0002), hi = std::log(40.0);
  for (int i = 0; i < 13; ++i) g.push_back(std::exp(lo + (hi - lo) * i / 12.0));
  g.front() = 0.0002;
  g.back() = 40.0;
  return g;
}

inline void locate_argmax(PolicyGridResult& r, const WelfareOptions& opt)
{
  for (int j = 0; j < 2; ++j) {
    r.argmax[j] = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < r.points.size(); ++i) {
      const auto& e = r.points[i];
      if (!e.feasible) continue;
      const double v = rank_value(e, j, opt);
      if (v > best) {
        best = v;
        r.argmax[j] = static_cast<int>(i);
      }
    }
  }
  if (r.argmax[0] < 0) throw AllPointsInfeasible("no feasible policy point on the grid");
}

inline std::vector<WelfareEval> evaluate_points(const SteadyState& ss, const std::vector<PolicyPoint>& pts,
                                                const WelfareOptions& opt, int workers)
{
  std::vector<WelfareEval> out(pts.size());
  WelfareOptions inner = opt;
  inner.diff.workers = 1;
  parallel_for(static_cast<int>(pts.size()), workers,
               [&](int i) { out[i] = evaluate_welfare(ss, pts[i], inner); });
  return out;
}

inline PolicyGridResult grid_search(const ModelParameters& p, const std::vector<double>& taus,
                                    const std::vector<double>& phis, const WelfareOptions& opt = {},
                                    int workers = 1, bool refine = false)
{
  if (taus.empty() || phis.empty()) throw std::invalid_argument("empty policy grid");
  const SteadyState ss = solve_steady_state(p);
  std::vector<PolicyPoint> pts;
  for (double t : taus)
    for (double f : phis) pts.emplace_back(t, f);
  PolicyGridResult r;
  r.conditional = opt.conditional;
  r.points = evaluate_points(ss, pts, opt, workers);
  r.benchmark = evaluate_welfare(ss, PolicyPoint(p.tau_C, p.phi_s), opt);
  locate_argmax(r, opt);

  if (refine) {
    std::vector<double> ts(taus), fs(phis);
    std::sort(ts.begin(), ts.end());
    std::sort(fs.begin(), fs.end());
    std::vector<PolicyPoint> extra;
    auto add = [&](double t, double f) {
      PolicyPoint q(t, f);
      for (const auto& e : r.points)
        if (e.point == q) return;
      for (const auto& e : extra)
        if (e == q) return;
      extra.push_back(q);
    };
    for (int j = 0; j < 2; ++j) {
      const PolicyPoint b = r.best(j).point;
      const auto it = std::lower_bound(ts.begin(), ts.end(), b.tau_C);
      const auto jt = std::lower_bound(fs.begin(), fs.end(), b.phi_s);
      std::vector<double> tcand{b.tau_C}, fcand{b.phi_s};
      if (it != ts.begin()) tcand.push_back(0.5 * (*(it - 1) + b.tau_C));
      if (it + 1 != ts.end() && it != ts.end()) tcand.push_back(0.5 * (*(it + 1) + b.tau_C));
      if (jt != fs.begin()) fcand.push_back(std::sqrt(*(jt - 1) * b.phi_s));
      if (jt + 1 != fs.end() && jt != fs.end()) fcand.push_back(std::sqrt(*(jt + 1) * b.phi_s));
      for (double t : tcand)
        for (double f : fcand) add(t, f);
    }
    auto more = evaluate_points(ss, extra, opt, workers);
    r.points.insert(r.points.end(), more.begin(), more.end());
    locate_argmax(r, opt);
  }
  return r;
}

struct HomotheticComparison {
  PolicyGridResult nonhomothetic, homothetic;
  double gain_ratio[2] = {NAN, NAN};  // welfare gain at optimum, non-homothetic over homothetic
};

inline HomotheticComparison homotheticity_comparison(const ModelParameters& p, const std::vector<double>& taus,
                                                     const std::vector<double>& phis,
                                                     const WelfareOptions& opt = {}, int workers = 1,
                                                     bool refine = false)
{
  HomotheticComparison c;
  c.nonhomothetic = grid_search(p, taus, phis, opt, workers, refine);
  ModelParameters q = p;
  q.phi_Co = 0.0;
  c.homothetic = grid_search(q, taus, phis, opt, workers, refine);
  for (int j = 0; j < 2; ++j) c.gain_ratio[j] = c.nonhomothetic.welfare_gain(j) / c.homothetic.welfare_gain(j);
  return c;
}

}  // namespace tanksoe

#endif
