#ifndef TANKSOE_MODEL_HPP
#define TANKSOE_MODEL_HPP

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "params.hpp"

namespace tanksoe {

// Endogenous variables. Real quantities are deflated by the productivity trend,
// prices are relative to the domestic final good, rates are gross.
namespace var {
enum : int {
  pco_f, rstar, yco, dA, cR, cH, lR, lH, l, w,
  cCoR, cNR, cDR, cFR, cCoH, cNH, cDH, cFH, cN,
  pN, pm, pCo, pcR, pcH, px, pI, pk, q,
  pi, piN, piCo, picR, picH, s, St, Rd, Rk, r,
  k, inv, y, pstar, Kc, Fc, mc, dstar, fO, z, g, x, VR, VH,
  n_vars
};
}  // namespace var
using var::n_vars;

namespace shock {
enum : int { eps_P, eps_Rstar, eps_R, eps_C, eps_A, n_shocks };
}
using shock::n_shocks;

inline constexpr std::array<std::string_view, n_vars> var_names = {
    "pco_f", "rstar", "yco", "dA", "cR", "cH", "lR", "lH", "l", "w",
    "cCoR", "cNR", "cDR", "cFR", "cCoH", "cNH", "cDH", "cFH", "cN",
    "pN", "pm", "pCo", "pcR", "pcH", "px", "pI", "pk", "q",
    "pi", "piN", "piCo", "picR", "picH", "s", "St", "Rd", "Rk", "r",
    "k", "i", "y", "pstar", "Kc", "Fc", "mc", "dstar", "fO", "z", "g", "x", "VR", "VH"};

inline constexpr std::array<std::string_view, n_shocks> shock_names = {
    "eps_P", "eps_Rstar", "eps_R", "eps_C", "eps_A"};

inline constexpr std::array<std::string_view, n_vars> equation_names = {
    "calvo_K", "calvo_F", "calvo_reset", "calvo_dispersion", "labor_demand",
    "euler_bond", "euler_foreign", "euler_capital", "production", "market_clearing",
    "noncommodity_aggregate", "price_N", "price_m", "price_Co", "price_cR", "price_cH",
    "infl_N", "infl_Co", "infl_cR", "infl_cH",
    "demand_CoR", "demand_NR", "demand_DR", "demand_FR",
    "demand_CoH", "demand_NH", "demand_DH", "demand_FH",
    "terms_of_trade", "real_exchange_rate", "depreciation",
    "capital_producer", "capital_accumulation", "rental_rate", "capital_return", "price_I",
    "labor_aggregate", "labor_supply_H", "labor_supply_R", "budget_H",
    "scale_factor", "external_balance", "foreign_debt", "taylor_rule", "fiscal_rule",
    "exports", "ar_Pco", "ar_Rstar", "ar_yCo", "ar_A", "welfare_R", "welfare_H"};

// Variables entering the system with a lag.
inline constexpr std::array<int, 17> predetermined = []{
  using namespace var;
  return std::array<int, 17>{
    pco_f, rstar, yco, dA, pN, pCo, pcR, pcH, q, St, Rd, pk, k, inv, pstar, dstar, z};
}();

enum class Unit { percent, annualized, annualized_level, log_percent, level };

inline Unit unit_of(int v)
{
  using namespace var;
  switch (v) {
    case rstar: case pi: case piN: case piCo: case picR: case picH:
    case s: case Rd: case Rk: return Unit::annualized;
    case dA: return Unit::annualized_level;
    case St: return Unit::log_percent;
    case VR: case VH: return Unit::level;
    default: return Unit::percent;
  }
}

inline int find_var(std::string_view name)
{
  for (int i = 0; i < n_vars; ++i)
    if (var_names[i] == name) return i;
  return -1;
}

inline int find_shock(std::string_view name)
{
  for (int i = 0; i < n_shocks; ++i)
    if (shock_names[i] == name) return i;
  return -1;
}

// Steady-state objects the dynamic equations are anchored to.
struct Anchors {
  double ybar = 1.0;
  double revbar = 1.0;
};

struct Model {
  ModelParameters p;
  Anchors a;

  double Rdbar() const { return p.pi_bar * std::exp(p.DeltaA_bar) / p.beta; }
  double Rstarbar() const { return p.pi_f * std::exp(p.DeltaA_bar) / p.beta; }

  template <class T>
  static T ptilde(const ModelParameters& p, T pi_)
  {
    using std::pow;
    return pow((1 - p.theta * pow(pi_, T(p.epsilon - 1))) / (1 - p.theta), T(1 / (1 - p.epsilon)));
  }

  template <class T>
  static T unit_price(const ModelParameters& p, T pCo_, T pN_)
  {
    using std::pow;
    return pow(pCo_ / p.alpha_Co, T(p.alpha_Co)) * pow(pN_ / (1 - p.alpha_Co), T(1 - p.alpha_Co));
  }

  template <class T>
  void residuals(const T* M, const T* C, const T* F, const T* e, T* res) const
  {
    using namespace var;
    using namespace shock;
    using std::exp;
    using std::log;
    using std::pow;
    const double b = p.beta, th = p.theta, ep = p.epsilon, al = p.alpha, ac = p.alpha_Co;
    const double lam = p.lambda_R, phi = p.phi_Co, om = p.omega_D, etc = p.eta_c;
    const double gI = p.gamma_I, nI = p.nu_I, kap = p.kappa_I, muI = std::exp(p.DeltaA_bar);
    const double dK = p.delta_K;

    const T puC = unit_price(p, C[pCo], C[pN]);
    const T puF = unit_price(p, F[pCo], F[pN]);
    const T lamC = 1 / (puC * C[cR]);
    const T lamF = 1 / (puF * F[cR]);
    const T kt = M[k] * exp(-C[dA]);
    const T gIc = C[inv] * exp(C[dA]) / M[inv];
    const T gIf = F[inv] * exp(F[dA]) / C[inv];
    auto Sadj = [&](T gg) { return T(kap / 2) * (gg - muI) * (gg - muI); };
    auto Sadjp = [&](T gg) { return T(kap) * (gg - muI); };
    const T ptC = ptilde(p, C[pi]);

    int i = 0;
    res[i++] = C[Kc] - (T(ep / (ep - 1)) * lamC * C[y] * C[mc] + b * th * pow(F[pi], T(ep)) * F[Kc]);
    res[i++] = C[Fc] - (lamC * C[y] + b * th * pow(F[pi], T(ep - 1)) * F[Fc]);
    res[i++] = C[Kc] - C[Fc] * ptC;
    res[i++] = 1 / C[pstar] - ((1 - th) * pow(ptC, T(-ep)) + th * pow(C[pi], T(ep)) / M[pstar]);
    res[i++] = (1 - p.nu_subsidy) * C[w] - (1 - al) * C[mc] * pow(kt / C[l], T(al));
    res[i++] = 1 - b * (lamF / lamC) * C[Rd] / (F[pi] * exp(F[dA]));
    res[i++] = lamC - (-p.gamma_portfolio * (C[dstar] / (C[z] * C[pcR]) - p.Upsilon) +
                     b * lamF * F[s] * C[rstar] / (F[pi] * exp(F[dA])));
    res[i++] = 1 - b * (lamF / lamC) * F[Rk] / (F[pi] * exp(F[dA]));
    res[i++] = C[y] - C[pstar] * pow(kt, T(al)) * pow(C[l], T(1 - al));
    const T Id = gI * pow(C[pI], T(nI)) * C[inv];
    res[i++] = C[y] - (Id + lam * C[cDR] + (1 - lam) * C[cDH] + C[g] * C[z] + C[x]);
    res[i++] = C[cN] - (lam * C[cNR] + (1 - lam) * C[cNH]);
    res[i++] = C[pN] - pow(om + (1 - om) * pow(C[pm], T(1 - etc)), T(1 / (1 - etc)));
    res[i++] = C[pm] - C[pcR] * C[q];
    res[i++] = C[pCo] - C[pm] * C[pco_f];
    res[i++] = C[pcR] - (puC + C[pCo] * phi / C[cR]);
    res[i++] = C[pcH] - (puC + C[pCo] * phi / C[cH]);
    res[i++] = C[piN] - C[pi] * C[pN] / M[pN];
    res[i++] = C[piCo] - C[pi] * C[pCo] / M[pCo];
    res[i++] = C[picR] - C[pi] * C[pcR] / M[pcR];
    res[i++] = C[picH] - C[pi] * C[pcH] / M[pcH];
    const int cc[2] = {cR, cH};
    const int co[2] = {cCoR, cCoH}, cn[2] = {cNR, cNH}, cd[2] = {cDR, cDH}, cf[2] = {cFR, cFH};
    for (int j = 0; j < 2; ++j) {
      res[i++] = C[co[j]] - (ac * puC * C[cc[j]] / C[pCo] + phi);
      res[i++] = C[cn[j]] - (1 - ac) * puC * C[cc[j]] / C[pN];
      res[i++] = C[cd[j]] - om * pow(C[pN], T(etc)) * C[cn[j]];
      res[i++] = C[cf[j]] - (1 - om) * pow(C[pN] / C[pm], T(etc)) * C[cn[j]];
    }
    res[i++] = C[px] * C[q] * C[pcR] - 1;
    res[i++] = C[q] / M[q] - C[s] * p.pi_f / C[picR];
    res[i++] = C[s] - p.psi_S * exp(C[St] - M[St]);
    res[i++] = C[pI] - C[pk] * (1 - Sadj(gIc) - Sadjp(gIc) * gIc) -
             b * (lamF / lamC) * exp(-F[dA]) * F[pk] * Sadjp(gIf) * gIf * gIf;
    res[i++] = C[k] - ((1 - dK) * exp(-C[dA]) * M[k] + (1 - Sadj(gIc)) * C[inv]);
    res[i++] = C[r] - al * C[mc] * pow(C[l] / kt, T(1 - al));
    res[i++] = C[Rk] - C[pi] * (C[r] + (1 - dK) * C[pk]) / M[pk];
    res[i++] = C[pI] - pow(gI + (1 - gI) * pow(C[pm], T(1 - nI)), T(1 / (1 - nI)));
    res[i++] = C[l] - (lam * C[lR] + (1 - lam) * C[lH]);
    res[i++] = C[w] - p.chi_H * pow(C[lH], T(p.varphi)) * puC * C[cH];
    res[i++] = C[w] - p.chi_R * pow(C[lR], T(p.varphi)) * puC * C[cR];
    res[i++] = puC * C[cH] + C[pCo] * phi - C[w] * C[lH];
    res[i++] = log(C[z]) - (p.delta_Z * log(M[z]) - p.delta_Z * (C[dA] - p.DeltaA_bar));
    const T If = (1 - gI) * pow(C[pI] / C[pm], T(nI)) * C[inv];
    const T cCo = lam * C[cCoR] + (1 - lam) * C[cCoH];
    const T NX = C[x] + C[pCo] * (C[yco] - cCo) - C[pm] * (If + lam * C[cFR] + (1 - lam) * C[cFH]);
    res[i++] = NX - (C[dstar] - M[rstar] * C[s] / (C[pi] * exp(C[dA])) * M[dstar]);
    res[i++] = C[fO] - C[dstar];
    const T infl = lam * C[picR] + (1 - lam) * C[picH];
    res[i++] = log(C[Rd] / Rdbar()) - p.rho_R * log(M[Rd] / Rdbar()) -
             (1 - p.rho_R) * (p.phi_pi * log(infl / p.pi_bar) + p.phi_y * log(C[y] / a.ybar) +
                              p.phi_s * C[St]) -
             e[eps_R];
    const double scale = p.fiscal_scale == FiscalScale::level ? 1.0 : a.revbar;
    res[i++] = C[g] - (p.gbar + p.tau_C * scale * (C[pco_f] * C[yco] / (p.Pbar_Co * p.Ybar_Co) - 1));
    res[i++] = C[x] - pow(C[px], T(-p.eta_f)) * p.Ybar_f * C[z];
    res[i++] = log(C[pco_f] / p.Pbar_Co) - p.rho_Pco * log(M[pco_f] / p.Pbar_Co) - e[eps_P];
    res[i++] = log(C[rstar] / Rstarbar()) - p.rho_Rstar * log(M[rstar] / Rstarbar()) - e[eps_Rstar];
    res[i++] = log(C[yco] / p.Ybar_Co) - p.rho_yCo * log(M[yco] / p.Ybar_Co) - e[eps_C];
    res[i++] = C[dA] - p.DeltaA_bar - p.rho_A * (M[dA] - p.DeltaA_bar) - e[eps_A];
    const int ll[2] = {lR, lH}, vv[2] = {VR, VH};
    const double chi[2] = {p.chi_R, p.chi_H};
    for (int j = 0; j < 2; ++j) {
      const T u = log(C[cc[j]]) - chi[j] * pow(C[ll[j]], T(1 + p.varphi)) / (1 + p.varphi);
      res[i++] = C[vv[j]] - (u + b * F[vv[j]]);
    }
  }

  std::vector<double> shock_std() const
  {
    return {p.sigma_Pco, p.sigma_Rstar, p.sigma_R, p.sigma_yCo, p.sigma_A};
  }
};

}  // namespace tanksoe

#endif
