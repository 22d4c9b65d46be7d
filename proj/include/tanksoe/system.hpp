#ifndef TANKSOE_SYSTEM_HPP
#define TANKSOE_SYSTEM_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steady_state.hpp"

namespace tanksoe {

// f(y_{t-1}, y_t, y_{t+1}, eps_t) = 0 with the argument stacked as [ym, y, yp, e].
struct DynamicSystem {
  int n = 0;
  int ne = 0;
  std::function<void(const long double* x, long double* out)> f;
  std::vector<double> ss;
  std::vector<int> states;  // endogenous variables that appear with a lag
  Eigen::MatrixXd Sigma;    // innovation covariance
  std::vector<std::string> names;
  std::vector<std::string> shocks;
  std::vector<Unit> units;  // reporting units, empty for raw deviations

  int nx() const { return 3 * n + ne; }
  std::vector<long double> point() const
  {
    std::vector<long double> x(nx(), 0.0L);
    for (int i = 0; i < n; ++i) x[i] = x[n + i] = x[2 * n + i] = ss[i];
    return x;
  }
};

inline Eigen::MatrixXd shock_covariance(const Model& m)
{
  const auto sd = m.shock_std();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_shocks, n_shocks);
  for (int i = 0; i < n_shocks; ++i) S(i, i) = sd[i] * sd[i];
  return S;
}

inline DynamicSystem make_system(const SteadyState& st)
{
  DynamicSystem sys;
  sys.n = n_vars;
  sys.ne = n_shocks;
  auto model = std::make_shared<const Model>(st.model);
  sys.f = [model](const long double* x, long double* out) {
    model->residuals<long double>(x, x + n_vars, x + 2 * n_vars, x + 3 * n_vars, out);
  };
  sys.ss = st.values;
  sys.states.assign(predetermined.begin(), predetermined.end());
  std::sort(sys.states.begin(), sys.states.end());
  sys.Sigma = shock_covariance(st.model);
  for (auto nm : var_names) sys.names.emplace_back(nm);
  for (auto nm : shock_names) sys.shocks.emplace_back(nm);
  for (int v = 0; v < n_vars; ++v) sys.units.push_back(unit_of(v));
  return sys;
}

}  // namespace tanksoe

#endif
