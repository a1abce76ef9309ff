#pragma once

#include <functional>
#include <vector>

namespace paretobin {

struct NelderMeadOptions {
  int max_evals = 50000;
  double xtol = 1e-7;   // simplex diameter
  double ftol = 1e-12;  // value spread across the simplex
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Downhill simplex minimization. Derivative-free on purpose: the objectives it
// serves (density log-likelihoods, penalized frontier searches) are cheap but
// have awkward analytic gradients.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& step,
                             const NelderMeadOptions& opts = {});

}  // namespace paretobin
