#ifndef TANKSOE_SOLUTION_HPP
#define TANKSOE_SOLUTION_HPP

#include <optional>

#include "perturbation.hpp"

namespace tanksoe {

struct Solution {
  SteadyState ss;
  DynamicSystem sys;
  DerivativeBundle deriv;
  FirstOrderSolution first;
  std::optional<SecondOrderSolution> second;
  int order = 1;
};

// parameters -> steady state -> derivatives -> perturbation
inline Solution solve_model(const ModelParameters& p, int order = 2, const DiffOptions& opt = {})
{
  Solution s;
  s.order = order;
  s.ss = solve_steady_state(p);
  s.sys = make_system(s.ss);
  s.deriv = jacobians(s.sys, opt);
  s.first = solve_first_order(s.deriv, s.sys.states);
  if (order >= 2) {
    hessians(s.sys, s.deriv, opt);
    s.second = solve_second_order(s.deriv, s.first, s.sys.Sigma);
  }
  return s;
}

}  // namespace tanksoe

#endif
