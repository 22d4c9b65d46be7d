#ifndef TANKSOE_STEADY_STATE_HPP
#define TANKSOE_STEADY_STATE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "model.hpp"

namespace tanksoe {

struct SteadyStateError : std::runtime_error {
  enum Kind { no_sign_switch, multiple_sign_switches, subsistence_violation, residual };
  Kind kind;
  SteadyStateError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct SteadyStateDiagnostics {
  std::string outer_unknown = "pm";
  double residual_max = 0.0;
  int outer_iterations = 0;
  int grid_points = 0;
  std::vector<std::pair<double, double>> brackets;
};

struct SteadyState {
  Model model;  // parameters with chi_R, chi_H, gbar, psi_S and anchors filled in
  std::vector<double> values;
  SteadyStateDiagnostics diag;

  double operator[](int v) const { return values[v]; }
};

namespace detail {

// Everything that follows in closed form from the import relative price.
struct Inner {
  double pm, pN, pCo, pu, pI, pk, r, mc, pstar, w, kt, k, y, inv, g, x;
  double cR, cH, pcR, pcH, EH, cCo, NX, dstar, h;
};

inline Inner inner_given_pm(const ModelParameters& P, double pm)
{
  Inner o{};
  const double b = P.beta, th = P.theta, e = P.epsilon, pib = P.pi_bar, ga = P.DeltaA_bar;
  const double a = P.alpha, ac = P.alpha_Co, lam = P.lambda_R;
  const double ptil = Model::ptilde(P, pib);
  o.pm = pm;
  o.pstar = (1 - th * std::pow(pib, e)) / ((1 - th) * std::pow(ptil, -e));
  o.mc = ptil * (e - 1) / e * (1 - b * th * std::pow(pib, e)) / (1 - b * th * std::pow(pib, e - 1));
  o.pI = std::pow(P.gamma_I + (1 - P.gamma_I) * std::pow(pm, 1 - P.nu_I), 1 / (1 - P.nu_I));
  o.pk = o.pI;
  o.r = o.pk * (std::exp(ga) / b - 1 + P.delta_K);
  const double kl = std::pow(a * o.mc / o.r, 1 / (1 - a));
  o.w = (1 - a) * o.mc * std::pow(kl, a) / (1 - P.nu_subsidy);
  o.kt = kl * P.lbar;
  o.k = o.kt * std::exp(ga);
  o.y = o.pstar * std::pow(o.kt, a) * std::pow(P.lbar, 1 - a);
  o.inv = o.k * (1 - (1 - P.delta_K) * std::exp(-ga));
  o.pN = std::pow(P.omega_D + (1 - P.omega_D) * std::pow(pm, 1 - P.eta_c), 1 / (1 - P.eta_c));
  o.pCo = pm * P.Pbar_Co;
  o.pu = Model::unit_price(P, o.pCo, o.pN);
  o.g = P.eta_g * (o.y + o.pCo * P.Ybar_Co);
  o.EH = o.w * P.lbar;
  o.cH = (o.EH - o.pCo * P.phi_Co) / o.pu;
  o.x = std::pow(pm, P.eta_f) * P.Ybar_f;
  const double Id = P.gamma_I * std::pow(o.pI, P.nu_I) * o.inv;
  const double dshare = P.omega_D * std::pow(o.pN, P.eta_c);
  const double cNH = (1 - ac) * o.pu * o.cH / o.pN;
  const double cDR = (o.y - Id - (1 - lam) * dshare * cNH - o.g - o.x) / lam;
  const double cNR = cDR / dshare;
  o.cR = cNR * o.pN / ((1 - ac) * o.pu);
  o.pcR = o.pu + o.pCo * P.phi_Co / o.cR;
  o.pcH = o.pu + o.pCo * P.phi_Co / o.cH;
  const double cCoR = ac * o.pu * o.cR / o.pCo + P.phi_Co;
  const double cCoH = ac * o.pu * o.cH / o.pCo + P.phi_Co;
  const double cF = (1 - P.omega_D) * std::pow(o.pN / pm, P.eta_c) * (lam * cNR + (1 - lam) * cNH);
  const double If = (1 - P.gamma_I) * std::pow(o.pI / pm, P.nu_I) * o.inv;
  o.cCo = lam * cCoR + (1 - lam) * cCoH;
  o.NX = o.x + o.pCo * (P.Ybar_Co - o.cCo) - pm * (If + cF);
  o.dstar = P.Upsilon * o.pcR;
  o.h = o.NX - o.dstar * (1 - 1 / b);
  // outside the interior domain the residual is undefined
  if (!(o.cR > 0) || !(o.cH > 0)) o.h = std::numeric_limits<double>::quiet_NaN();
  return o;
}

}  // namespace detail

inline std::vector<double> fill_steady_state(Model& m, double pm_)
{
  using namespace var;
  ModelParameters& P = m.p;
  const auto o = detail::inner_given_pm(P, pm_);
  if (!(o.cR > 0) || !(o.cH > 0))
    throw SteadyStateError(SteadyStateError::subsistence_violation,
                           "steady-state consumption not above subsistence");
  const double b = P.beta, pib = P.pi_bar, ga = P.DeltaA_bar, e = P.epsilon, th = P.theta;
  const double ac = P.alpha_Co, lam = P.lambda_R;
  std::vector<double> v(n_vars);
  v[pco_f] = P.Pbar_Co;
  v[rstar] = m.Rstarbar();
  v[yco] = P.Ybar_Co;
  v[dA] = ga;
  v[pstar] = o.pstar;
  v[mc] = o.mc;
  v[pm] = pm_;
  v[pI] = o.pI;
  v[pk] = o.pk;
  v[r] = o.r;
  v[w] = o.w;
  v[l] = v[lR] = v[lH] = P.lbar;
  v[k] = o.k;
  v[y] = o.y;
  v[inv] = o.inv;
  v[pN] = o.pN;
  v[pCo] = o.pCo;
  v[cR] = o.cR;
  v[cH] = o.cH;
  v[pcR] = o.pcR;
  v[pcH] = o.pcH;
  const int cc[2] = {cR, cH}, co[2] = {cCoR, cCoH}, cn[2] = {cNR, cNH}, cd[2] = {cDR, cDH},
            cf[2] = {cFR, cFH};
  for (int j = 0; j < 2; ++j) {
    v[co[j]] = ac * o.pu * v[cc[j]] / o.pCo + P.phi_Co;
    v[cn[j]] = (1 - ac) * o.pu * v[cc[j]] / o.pN;
    v[cd[j]] = P.omega_D * std::pow(o.pN, P.eta_c) * v[cn[j]];
    v[cf[j]] = (1 - P.omega_D) * std::pow(o.pN / pm_, P.eta_c) * v[cn[j]];
  }
  v[cN] = lam * v[cNR] + (1 - lam) * v[cNH];
  v[px] = 1 / pm_;
  v[q] = pm_ / o.pcR;
  v[pi] = v[piN] = v[piCo] = v[picR] = v[picH] = pib;
  P.psi_S = pib / P.pi_f;
  v[s] = P.psi_S;
  v[St] = 0.0;
  v[Rd] = m.Rdbar();
  v[Rk] = pib * (o.r + (1 - P.delta_K) * o.pk) / o.pk;
  const double lamR = 1 / (o.pu * o.cR);
  v[Kc] = e / (e - 1) * lamR * o.y * o.mc / (1 - b * th * std::pow(pib, e));
  v[Fc] = lamR * o.y / (1 - b * th * std::pow(pib, e - 1));
  v[dstar] = v[fO] = o.dstar;
  v[z] = 1.0;
  v[g] = o.g;
  v[x] = o.x;
  P.chi_R = o.w / (std::pow(P.lbar, P.varphi) * o.pu * o.cR);
  P.chi_H = o.w / (std::pow(P.lbar, P.varphi) * o.pu * o.cH);
  P.gbar = o.g;
  m.a.ybar = o.y;
  m.a.revbar = o.pCo * P.Ybar_Co;
  const double dis = std::pow(P.lbar, 1 + P.varphi) / (1 + P.varphi);
  v[VR] = (std::log(o.cR) - P.chi_R * dis) / (1 - b);
  v[VH] = (std::log(o.cH) - P.chi_H * dis) / (1 - b);
  return v;
}

inline double residual_max(const Model& m, const std::vector<double>& ss)
{
  std::vector<long double> yl(ss.begin(), ss.end()), e(n_shocks, 0.0L), res(n_vars);
  m.residuals<long double>(yl.data(), yl.data(), yl.data(), e.data(), res.data());
  long double worst = 0;
  for (auto v : res) worst = std::max(worst, std::fabs(v));
  return static_cast<double>(worst);
}

inline SteadyState solve_steady_state(const ModelParameters& params,
                                      std::optional<double> pm_hint = std::nullopt)
{
  validate(params);
  SteadyState out;
  out.model.p = params;
  auto h = [&](double pm_) { return detail::inner_given_pm(params, pm_).h; };
  const double rel_tol = 1e-14;
  double root = 0.0;
  bool done = false;

  if (pm_hint && *pm_hint > 0) {
    // Newton-secant steps from a previous solution.
    double x0 = *pm_hint, f0 = h(x0);
    for (int it = 1; it <= 2 && std::isfinite(f0); ++it) {
      out.diag.outer_iterations = it;
      const double dx = 1e-7 * x0;
      const double slope = (h(x0 + dx) - h(x0 - dx)) / (2 * dx);
      const double step = f0 / slope;
      if (std::fabs(step) <= 1e-10 * x0) {
        root = x0 - step;
        done = true;
        break;
      }
      x0 -= step;
      f0 = h(x0);
    }
  }

  if (!done) {
    const int N = 2000;
    const double lo = -3.0, hi = 3.0;
    std::vector<double> xs(N), hs(N);
    for (int i = 0; i < N; ++i) {
      xs[i] = std::pow(10.0, lo + (hi - lo) * i / (N - 1));
      hs[i] = h(xs[i]);
    }
    out.diag.grid_points = N;
    for (int i = 1; i < N; ++i) {
      if (!std::isfinite(hs[i]) || !std::isfinite(hs[i - 1])) continue;
      if ((hs[i] > 0) != (hs[i - 1] > 0)) out.diag.brackets.emplace_back(xs[i - 1], xs[i]);
    }
    if (out.diag.brackets.empty())
      throw SteadyStateError(SteadyStateError::no_sign_switch,
                             "no sign switch of the external-balance residual on the pm grid");
    if (out.diag.brackets.size() > 1) {
      std::string msg = "multiple sign switches on the pm grid:";
      for (auto& [a, b] : out.diag.brackets)
        msg += " [" + std::to_string(a) + "," + std::to_string(b) + "]";
      throw SteadyStateError(SteadyStateError::multiple_sign_switches, msg);
    }
    auto [a, b] = out.diag.brackets.front();
    std::uintmax_t iters = 200;
    auto tol = [rel_tol](double u, double v) { return std::fabs(u - v) <= rel_tol * std::fabs(u); };
    auto res = boost::math::tools::toms748_solve(h, a, b, tol, iters);
    out.diag.outer_iterations = static_cast<int>(iters);
    root = 0.5 * (res.first + res.second);
  }

  out.values = fill_steady_state(out.model, root);
  const auto& v = out.values;
  if (v[var::cCoR] <= params.phi_Co || v[var::cCoH] <= params.phi_Co)
    throw SteadyStateError(SteadyStateError::subsistence_violation,
                           "steady-state commodity consumption not above subsistence");
  out.diag.residual_max = residual_max(out.model, v);
  if (!(out.diag.residual_max < 1e-8))
    throw SteadyStateError(SteadyStateError::residual,
                           "steady-state residual " + std::to_string(out.diag.residual_max));
  return out;
}

struct CalibrationTargets {
  double share_R, share_H, exports_gdp, commodity_export_share, gov_gdp;
};

inline CalibrationTargets calibration_targets(const SteadyState& ss)
{
  using namespace var;
  const auto& v = ss.values;
  const double lam = ss.model.p.lambda_R;
  const double gdp = v[y] + v[pCo] * v[yco];
  const double cco = lam * v[cCoR] + (1 - lam) * v[cCoH];
  const double co_exp = v[pCo] * (v[yco] - cco);
  CalibrationTargets t{};
  t.share_R = v[pCo] * v[cCoR] / (v[pcR] * v[cR]);
  t.share_H = v[pCo] * v[cCoH] / (v[pcH] * v[cH]);
  t.exports_gdp = (v[x] + co_exp) / gdp;
  t.commodity_export_share = co_exp / (v[x] + co_exp);
  t.gov_gdp = v[g] / gdp;
  return t;
}

}  // namespace tanksoe

#endif
