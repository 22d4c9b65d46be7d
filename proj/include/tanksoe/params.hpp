#ifndef TANKSOE_PARAMS_HPP
#define TANKSOE_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanksoe {

enum class FiscalScale { level, revenue };

struct ModelParameters {
  // households
  double beta = std::pow(1.05, -0.25);
  double lambda_R = 0.5;
  double varphi = 1.0;
  double chi_R = 1.0;
  double chi_H = 1.0;
  double alpha_Co = 0.25;
  double phi_Co = 0.45;
  double omega_D = 0.45;
  double eta_c = 2.25;
  double lbar = 0.04638914;  // steady-state hours of each household

  // production and investment
  double gamma_I = 0.25;
  double nu_I = 0.75;
  double kappa_I = 2.0;
  double delta_K = 0.025;
  double alpha = 0.4;
  double theta = 0.75;
  double epsilon = 6.0;
  double nu_subsidy = 1.0 / 6.0;

  // external sector
  double eta_f = 1.5;
  double Ybar_f = 0.05618436;
  double Ybar_Co = 2.18746523;
  double Pbar_Co = 0.15;
  double delta_Z = 0.999;
  double DeltaA_bar = std::log(1.03) / 4.0;
  double pi_f = 1.0;
  double psi_S = 1.0;
  double gamma_portfolio = 0.01;
  double Upsilon = 0.4;

  // policy
  double gbar = 0.0;
  double eta_g = 0.30;
  double pi_bar = std::pow(1.05, 0.25);
  double rho_R = 0.75;
  double phi_pi = 1.5;
  double phi_y = 0.05;
  double phi_s = 0.02;
  double tau_C = 0.0;
  FiscalScale fiscal_scale = FiscalScale::revenue;

  // shocks
  double rho_Pco = 0.9;
  double sigma_Pco = 0.05;
  double rho_Rstar = 0.95;
  double sigma_Rstar = 0.0015;
  double sigma_R = 0.0025;
  double rho_yCo = 0.9;
  double sigma_yCo = 0.0;
  double rho_A = 0.5;
  double sigma_A = 0.0;
};

inline ModelParameters build_benchmark_parameters() { return {}; }

struct ParamField {
  const char* name;
  double ModelParameters::*ptr;
};

inline const std::vector<ParamField>& param_fields()
{
  using P = ModelParameters;
  static const std::vector<ParamField> f = {
      {"beta", &P::beta}, {"lambda_R", &P::lambda_R}, {"varphi", &P::varphi},
      {"chi_R", &P::chi_R}, {"chi_H", &P::chi_H}, {"alpha_Co", &P::alpha_Co},
      {"phi_Co", &P::phi_Co}, {"omega_D", &P::omega_D}, {"eta_c", &P::eta_c},
      {"lbar", &P::lbar}, {"gamma_I", &P::gamma_I}, {"nu_I", &P::nu_I},
      {"kappa_I", &P::kappa_I}, {"delta_K", &P::delta_K}, {"alpha", &P::alpha},
      {"theta", &P::theta}, {"epsilon", &P::epsilon}, {"nu_subsidy", &P::nu_subsidy},
      {"eta_f", &P::eta_f}, {"Ybar_f", &P::Ybar_f}, {"Ybar_Co", &P::Ybar_Co},
      {"Pbar_Co", &P::Pbar_Co}, {"delta_Z", &P::delta_Z}, {"DeltaA_bar", &P::DeltaA_bar},
      {"pi_f", &P::pi_f}, {"psi_S", &P::psi_S}, {"gamma_portfolio", &P::gamma_portfolio},
      {"Upsilon", &P::Upsilon}, {"gbar", &P::gbar}, {"eta_g", &P::eta_g},
      {"pi_bar", &P::pi_bar}, {"rho_R", &P::rho_R}, {"phi_pi", &P::phi_pi},
      {"phi_y", &P::phi_y}, {"phi_s", &P::phi_s}, {"tau_C", &P::tau_C},
      {"rho_Pco", &P::rho_Pco}, {"sigma_Pco", &P::sigma_Pco}, {"rho_Rstar", &P::rho_Rstar},
      {"sigma_Rstar", &P::sigma_Rstar}, {"sigma_R", &P::sigma_R}, {"rho_yCo", &P::rho_yCo},
      {"sigma_yCo", &P::sigma_yCo}, {"rho_A", &P::rho_A}, {"sigma_A", &P::sigma_A},
  };
  return f;
}

struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate(const ModelParameters& p)
{
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("invalid parameter: ") + what);
  };
  need(p.beta > 0 && p.beta < 1, "beta must lie in (0,1)");
  need(p.lambda_R > 0 && p.lambda_R < 1, "lambda_R must lie in (0,1)");
  need(p.theta >= 0 && p.theta < 1, "theta must lie in [0,1)");
  need(p.epsilon > 1, "epsilon must exceed 1");
  need(p.delta_K > 0 && p.delta_K < 1, "delta_K must lie in (0,1)");
  need(p.alpha > 0 && p.alpha < 1, "alpha must lie in (0,1)");
  need(p.alpha_Co > 0 && p.alpha_Co < 1, "alpha_Co must lie in (0,1)");
  need(p.omega_D > 0 && p.omega_D < 1, "omega_D must lie in (0,1)");
  need(p.gamma_I > 0 && p.gamma_I < 1, "gamma_I must lie in (0,1)");
  need(p.eta_c > 0 && p.nu_I > 0 && p.eta_f > 0 && p.varphi > 0, "elasticities must be positive");
  need(p.phi_Co >= 0, "phi_Co must be non-negative");
  need(p.lbar > 0 && p.Ybar_f > 0 && p.Ybar_Co > 0 && p.Pbar_Co > 0, "levels must be positive");
  need(p.tau_C >= -1 && p.tau_C <= 1, "tau_C must lie in [-1,1]");
  need(p.phi_s >= 0, "phi_s must be non-negative");
  for (double s : {p.sigma_Pco, p.sigma_Rstar, p.sigma_R, p.sigma_yCo, p.sigma_A})
    need(s >= 0, "shock standard deviations must be non-negative");
  for (double r : {p.rho_R, p.rho_Pco, p.rho_Rstar, p.rho_yCo, p.rho_A, p.delta_Z})
    need(r > -1 && r < 1, "autoregressive coefficients must lie in (-1,1)");
}

}  // namespace tanksoe

#endif
