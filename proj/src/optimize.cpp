#include "paretobin/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace paretobin {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& step,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];

  NelderMeadResult res;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    fv[i] = f(pts[i]);
    ++res.evals;
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (res.evals < opts.max_evals) {
    sort_simplex();
    const std::size_t best = order[0], worst = order[n];
    const std::size_t second_worst = order[n - 1];

    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t d = 0; d < n; ++d)
        diam = std::max(diam, std::abs(pts[order[i]][d] - pts[best][d]));
    if (diam < opts.xtol && std::abs(fv[worst] - fv[best]) < opts.ftol) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + alpha * (centroid[d] - pts[worst][d]);
    double fr = f(xr);
    ++res.evals;

    if (fr < fv[order[0]]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + gamma * (xr[d] - centroid[d]);
      double fe = f(xe);
      ++res.evals;
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const std::vector<double>& base = outside ? xr : pts[worst];
      for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + rho * (base[d] - centroid[d]);
      double fc = f(xc);
      ++res.evals;
      if (fc < (outside ? fr : fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            pts[i][d] = pts[best][d] + sigma * (pts[i][d] - pts[best][d]);
          fv[i] = f(pts[i]);
          ++res.evals;
        }
      }
    }
  }

  sort_simplex();
  res.x = pts[order[0]];
  res.fx = fv[order[0]];
  return res;
}

}  // namespace paretobin
