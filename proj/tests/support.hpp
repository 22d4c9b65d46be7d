#ifndef TANKSOE_TESTS_SUPPORT_HPP
#define TANKSOE_TESTS_SUPPORT_HPP

#include <functional>
#include <string>
#include <vector>

#include <tanksoe/tanksoe.hpp>

namespace tanksoe::testing {

using ToyFn = std::function<void(const long double* ym, const long double* y, const long double* yp,
                                 const long double* e, long double* out)>;

inline DynamicSystem toy_system(int n, int ne, std::vector<int> states, std::vector<double> ss, ToyFn fn,
                                Eigen::MatrixXd Sigma = {})
{
  DynamicSystem s;
  s.n = n;
  s.ne = ne;
  s.states = std::move(states);
  s.ss = std::move(ss);
  s.f = [fn, n](const long double* x, long double* out) { fn(x, x + n, x + 2 * n, x + 3 * n, out); };
  s.Sigma = Sigma.size() ? Sigma : Eigen::MatrixXd::Identity(ne, ne);
  for (int i = 0; i < n; ++i) s.names.push_back("y" + std::to_string(i));
  for (int i = 0; i < ne; ++i) s.shocks.push_back("e" + std::to_string(i));
  return s;
}

// y = a E y' + b y_- + e
inline DynamicSystem scalar_system(double a, double b)
{
  return toy_system(1, 1, {0}, {0.0}, [a, b](auto ym, auto y, auto yp, auto e, auto out) {
    out[0] = y[0] - a * yp[0] - b * ym[0] - e[0];
  });
}

// Shared benchmark solution; the pipeline is deterministic so solving once per binary is enough.
inline const Solution& benchmark()
{
  static const Solution s = solve_model(build_benchmark_parameters(), 2);
  return s;
}

}  // namespace tanksoe::testing

#endif
