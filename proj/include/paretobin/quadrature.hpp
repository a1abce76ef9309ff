#pragma once

#include <functional>
#include <vector>

namespace paretobin {

// Gauss-Kronrod 7/15 estimate over [a, b]; kronrod result plus error estimate.
// All nodes are interior, so integrable endpoint singularities never get
// evaluated at the endpoints themselves.
struct GkResult {
  double value;
  double error;
};
GkResult gk15(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection on the worst interval until the summed error estimate
// drops below abs_tol. Throws numeric_error if the interval budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_intervals = 4000);

// Cumulative integral of a non-negative density over [lo, hi], cached on an
// adaptively refined panel grid. eval() is monotone in w; inverse() is the
// monotone pseudo-inverse (flat stretches resolve to their left edge).
class CachedCdf {
 public:
  CachedCdf() = default;
  CachedCdf(std::function<double(double)> density, double lo, double hi,
            double panel_tol = 1e-12, int max_panels = 4096);

  double total() const { return total_; }
  // Integral from lo to w (not normalized).
  double eval(double w) const;
  // Smallest w with eval(w) >= target (target in [0, total]).
  double inverse(double target) const;

 private:
  std::function<double(double)> density_;
  std::vector<double> edges_;    // panel edges, size P+1
  std::vector<double> prefix_;   // cumulative integral at edges, size P+1
  double lo_ = 0.0, hi_ = 1.0, total_ = 0.0;
};

// Bisection for f increasing on [lo, hi] with f(lo) <= target <= f(hi).
double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, int iters = 200);

}  // namespace paretobin
