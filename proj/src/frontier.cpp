#include "paretobin/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "paretobin/errors.hpp"
#include "paretobin/optimize.hpp"
#include "paretobin/parallel.hpp"
#include "paretobin/rng.hpp"

namespace paretobin {

namespace {

constexpr double kRefineTol = 1e-4;

// Prefix sums of mass and class-1 mass; linear interpolation inside a micro-bin
// implements fractional cuts.
struct Prefix {
  std::vector<double> mass;  // size N+1
  std::vector<double> c1;    // size N+1
  double hy = 0.0;           // H(Y) of the fine model
  int N = 0;

  static Prefix build(const MicroBinModel& m) {
    Prefix p;
    p.N = m.N;
    p.mass.resize(static_cast<std::size_t>(m.N) + 1, 0.0);
    p.c1.resize(static_cast<std::size_t>(m.N) + 1, 0.0);
    for (int j = 0; j < m.N; ++j) {
      const std::size_t i = static_cast<std::size_t>(j);
      p.mass[i + 1] = p.mass[i] + m.mass[i];
      p.c1[i + 1] = p.c1[i] + m.mass[i] * m.p1[i];
    }
    const double total1 = p.c1.back();
    const double total = p.mass.back();
    p.hy = hterm(total1) + hterm(total - total1);
    return p;
  }

  double mass_at(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= N) return mass.back();
    const int i = static_cast<int>(x);
    const double fr = x - i;
    const std::size_t u = static_cast<std::size_t>(i);
    return mass[u] + fr * (mass[u + 1] - mass[u]);
  }

  double c1_at(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= N) return c1.back();
    const int i = static_cast<int>(x);
    const double fr = x - i;
    const std::size_t u = static_cast<std::size_t>(i);
    return c1[u] + fr * (c1[u + 1] - c1[u]);
  }

  // (H, I) of the grouping given sorted cut positions; no joint materialized.
  std::pair<double, double> eval(const std::vector<double>& cuts) const {
    double H = 0.0, Hzy = 0.0;
    double prev = 0.0;
    for (std::size_t g = 0; g <= cuts.size(); ++g) {
      const double hi = g < cuts.size() ? cuts[g] : static_cast<double>(N);
      const double m = mass_at(hi) - mass_at(prev);
      const double a = c1_at(hi) - c1_at(prev);
      H += hterm(m);
      Hzy += hterm(std::max(0.0, a)) + hterm(std::max(0.0, m - a));
      prev = hi;
    }
    double I = H + hy - Hzy;
    if (I < 0.0) I = 0.0;
    return {H, I};
  }
};

void check_cuts(const MicroBinModel& m, const ContiguousBinning& b) {
  double prev = 0.0;
  for (double c : b.cuts) {
    if (!(c > prev) || !(c < m.N))
      throw invalid_binning_error("cuts must be strictly increasing inside (0, N)");
    prev = c;
  }
}

ParetoPoint make_point(const Prefix& pre, std::vector<double> cuts, Provenance prov) {
  ParetoPoint pt;
  auto [H, I] = pre.eval(cuts);
  pt.H = H;
  pt.I = I;
  pt.M = static_cast<int>(cuts.size()) + 1;
  pt.binning.cuts = std::move(cuts);
  pt.provenance = prov;
  return pt;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::corner: return "corner";
    case Provenance::sampled: return "sampled";
    case Provenance::refined: return "refined";
    case Provenance::ba: return "ba";
  }
  return "?";
}

double FrontierCurve::interp_I(double H) const {
  if (points.empty()) return 0.0;
  if (H <= points.front().H) return points.front().I;
  if (H >= points.back().H) return points.back().I;
  auto it = std::lower_bound(points.begin(), points.end(), H,
                             [](const ParetoPoint& p, double h) { return p.H < h; });
  const ParetoPoint& b = *it;
  const ParetoPoint& a = *(it - 1);
  const double t = (H - a.H) / (b.H - a.H);
  return a.I + t * (b.I - a.I);
}

BinningEval eval_binning(const MicroBinModel& m, const ContiguousBinning& b) {
  m.validate();
  check_cuts(m, b);
  const Prefix pre = Prefix::build(m);
  BinningEval out;
  double prev = 0.0;
  out.joint.P.reserve(b.cuts.size() + 1);
  for (std::size_t g = 0; g <= b.cuts.size(); ++g) {
    const double hi = g < b.cuts.size() ? b.cuts[g] : static_cast<double>(m.N);
    const double mg = pre.mass_at(hi) - pre.mass_at(prev);
    const double ag = std::max(0.0, pre.c1_at(hi) - pre.c1_at(prev));
    out.joint.P.push_back({ag, std::max(0.0, mg - ag)});
    prev = hi;
  }
  auto [H, I] = pre.eval(b.cuts);
  out.H = H;
  out.I = I;
  return out;
}

// ---------------------------------------------------------------------------
// Corner search: DP over cut positions. cost(i, j) is the H(Y|Z) contribution
// of one group covering micro-bins [i, j).
// ---------------------------------------------------------------------------

namespace {

struct DpTables {
  std::vector<std::vector<double>> D;  // D[g][j]: min cost, first j bins in g groups
  std::vector<std::vector<int>> A;    // argmin predecessor
};

DpTables corner_dp(const Prefix& pre, int M_max, int workers, bool parallel) {
  const int N = pre.N;
  const double INF = std::numeric_limits<double>::infinity();
  DpTables t;
  t.D.assign(static_cast<std::size_t>(M_max) + 1,
             std::vector<double>(static_cast<std::size_t>(N) + 1, INF));
  t.A.assign(static_cast<std::size_t>(M_max) + 1,
             std::vector<int>(static_cast<std::size_t>(N) + 1, -1));
  t.D[0][0] = 0.0;

  auto cost = [&](int i, int j) {
    const double m = pre.mass[static_cast<std::size_t>(j)] - pre.mass[static_cast<std::size_t>(i)];
    const double a = pre.c1[static_cast<std::size_t>(j)] - pre.c1[static_cast<std::size_t>(i)];
    return hterm(a) + hterm(m - a) - hterm(m);
  };

  for (int g = 1; g <= M_max; ++g) {
    const std::vector<double>& prev = t.D[static_cast<std::size_t>(g - 1)];
    std::vector<double>& cur = t.D[static_cast<std::size_t>(g)];
    std::vector<int>& arg = t.A[static_cast<std::size_t>(g)];
    auto body = [&](std::size_t jj) {
      const int j = static_cast<int>(jj) + g;  // j ranges g..N
      double best = INF;
      int besti = -1;
      for (int i = g - 1; i < j; ++i) {
        const double p = prev[static_cast<std::size_t>(i)];
        if (p == INF) continue;
        const double v = p + cost(i, j);
        if (v < best) {
          best = v;
          besti = i;
        }
      }
      cur[static_cast<std::size_t>(j)] = best;
      arg[static_cast<std::size_t>(j)] = besti;
    };
    const std::size_t rows = static_cast<std::size_t>(N - g + 1);
    if (parallel)
      parallel_for(rows, workers, body);
    else
      for (std::size_t jj = 0; jj < rows; ++jj) body(jj);
  }
  return t;
}

std::vector<double> backtrack_cuts(const DpTables& t, int M, int N) {
  std::vector<double> cuts;
  cuts.reserve(static_cast<std::size_t>(M) - 1);
  int j = N;
  for (int g = M; g >= 1; --g) {
    const int i = t.A[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)];
    if (g > 1) cuts.push_back(static_cast<double>(i));
    j = i;
  }
  std::reverse(cuts.begin(), cuts.end());
  return cuts;
}

ParetoPoint corner_impl(const MicroBinModel& m, int M, int workers, bool parallel) {
  m.validate();
  if (!m.sorted) throw invalid_parameter_error("corner search requires a sorted model");
  if (M < 1 || M > m.N) throw infeasible_error("group count must be in [1, N]");
  const Prefix pre = Prefix::build(m);
  if (M == 1) return make_point(pre, {}, Provenance::corner);
  const DpTables t = corner_dp(pre, M, workers, parallel);
  return make_point(pre, backtrack_cuts(t, M, m.N), Provenance::corner);
}

}  // namespace

ParetoPoint corner(const MicroBinModel& m, int M, int workers) {
  return corner_impl(m, M, workers, true);
}

ParetoPoint corner_serial(const MicroBinModel& m, int M) {
  return corner_impl(m, M, 1, false);
}

std::vector<ParetoPoint> corners_up_to(const MicroBinModel& m, int M_max, int workers) {
  m.validate();
  if (!m.sorted) throw invalid_parameter_error("corner search requires a sorted model");
  if (M_max < 1 || M_max > m.N) throw infeasible_error("group count must be in [1, N]");
  const Prefix pre = Prefix::build(m);
  const DpTables t = corner_dp(pre, M_max, workers, true);
  std::vector<ParetoPoint> out;
  out.reserve(static_cast<std::size_t>(M_max));
  out.push_back(make_point(pre, {}, Provenance::corner));
  for (int M = 2; M <= M_max; ++M) out.push_back(make_point(pre, backtrack_cuts(t, M, m.N), Provenance::corner));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Floyd's algorithm: M-1 distinct values from {1..N-1}, then sorted.
std::vector<double> sample_cuts(SplitMix64& rng, int N, int M) {
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(M) - 1);
  for (int i = N - M + 1; i <= N - 1; ++i) {
    const int r = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
    if (std::find(chosen.begin(), chosen.end(), r) != chosen.end())
      chosen.push_back(i);
    else
      chosen.push_back(r);
  }
  std::sort(chosen.begin(), chosen.end());
  return {chosen.begin(), chosen.end()};
}

std::vector<ParetoPoint> sample_impl(const MicroBinModel& m, int M, int count, std::uint64_t seed,
                                     int workers, bool parallel) {
  m.validate();
  if (M < 1 || M > m.N) throw infeasible_error("group count must be in [1, N]");
  if (count < 1) throw invalid_parameter_error("sample count must be >= 1");
  const Prefix pre = Prefix::build(m);
  std::vector<ParetoPoint> out(static_cast<std::size_t>(count));
  auto body = [&](std::size_t s) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(M), s));
    out[s] = make_point(pre, sample_cuts(rng, m.N, M), Provenance::sampled);
  };
  if (parallel)
    parallel_for(static_cast<std::size_t>(count), workers, body);
  else
    for (std::size_t s = 0; s < static_cast<std::size_t>(count); ++s) body(s);
  return out;
}

}  // namespace

std::vector<ParetoPoint> sample_binnings(const MicroBinModel& m, int M, int count,
                                         std::uint64_t seed, int workers) {
  return sample_impl(m, M, count, seed, workers, true);
}

std::vector<ParetoPoint> sample_binnings_serial(const MicroBinModel& m, int M, int count,
                                                std::uint64_t seed) {
  return sample_impl(m, M, count, seed, 1, false);
}

// ---------------------------------------------------------------------------
// Constrained refinement.
// ---------------------------------------------------------------------------

namespace {

std::vector<double> sanitize_cuts(std::vector<double> c, int N) {
  std::sort(c.begin(), c.end());
  double lo = 1e-9;
  for (double& x : c) {
    x = std::clamp(x, lo, static_cast<double>(N) - 1e-9);
    if (x <= lo) x = lo;
    lo = x + 1e-12;
  }
  return c;
}

// Best point along a straight-line path between two cut vectors, by H
// proximity to the target.
std::vector<double> path_seed(const Prefix& pre, const std::vector<double>& from,
                              const std::vector<double>& to, double target) {
  std::vector<double> best = from;
  double best_gap = std::numeric_limits<double>::infinity();
  std::vector<double> cur(from.size());
  for (int s = 0; s <= 512; ++s) {
    const double t = s / 512.0;
    for (std::size_t i = 0; i < from.size(); ++i) cur[i] = (1.0 - t) * from[i] + t * to[i];
    std::vector<double> c = sanitize_cuts(cur, pre.N);
    const double gap = std::abs(pre.eval(c).first - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = c;
    }
  }
  return best;
}

std::vector<double> polish(const Prefix& pre, const std::vector<double>& seed, double target) {
  const double mu = 1e6;
  auto objective = [&](const std::vector<double>& x) {
    std::vector<double> c = sanitize_cuts(x, pre.N);
    auto [H, I] = pre.eval(c);
    const double viol = std::max(0.0, std::abs(H - target) - 0.5 * kRefineTol);
    return -I + mu * viol * viol;
  };
  NelderMeadOptions opts;
  opts.max_evals = 4000;
  opts.xtol = 1e-9;
  opts.ftol = 1e-13;
  std::vector<double> step(seed.size(), std::max(1.0, pre.N / 200.0));
  NelderMeadResult r = nelder_mead(objective, seed, step, opts);
  // Second pass with a tight simplex around the optimum.
  std::vector<double> step2(seed.size(), 0.25);
  r = nelder_mead(objective, sanitize_cuts(r.x, pre.N), step2, opts);
  return sanitize_cuts(r.x, pre.N);
}

}  // namespace

ParetoPoint refine(const MicroBinModel& m, const ContiguousBinning& start, double target_H) {
  m.validate();
  const Prefix pre = Prefix::build(m);
  const double log2N = std::log2(static_cast<double>(m.N));
  if (target_H > log2N + kRefineTol)
    throw infeasible_error("target entropy exceeds log2(N)");
  if (target_H < 0.0) throw infeasible_error("target entropy is negative");
  if (target_H <= kRefineTol) return make_point(pre, {}, Provenance::refined);

  const int M = static_cast<int>(start.cuts.size()) + 1;
  if (std::log2(static_cast<double>(M)) < target_H - kRefineTol)
    throw infeasible_error("M groups cannot reach the target entropy");

  std::vector<std::vector<double>> candidates;
  const std::vector<double> s0 = sanitize_cuts(start.cuts, m.N);
  candidates.push_back(s0);

  // Deterministic seeds: interpolate from the start toward full collapse
  // (H -> 0) and toward equal-mass cuts (H -> log2 M).
  std::vector<double> collapse(s0.size(), static_cast<double>(m.N) - 1e-9);
  std::vector<double> equal_mass(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i)
    equal_mass[i] = static_cast<double>(i + 1) * m.N / static_cast<double>(M);
  candidates.push_back(path_seed(pre, s0, collapse, target_H));
  candidates.push_back(path_seed(pre, s0, equal_mass, target_H));

  if (M == 2) {
    // Exhaustive integer scan: best I with H inside the band.
    double bestI = -1.0;
    int bestc = -1;
    for (int c = 1; c < m.N; ++c) {
      auto [H, I] = pre.eval({static_cast<double>(c)});
      if (std::abs(H - target_H) <= kRefineTol && I > bestI) {
        bestI = I;
        bestc = c;
      }
    }
    if (bestc > 0) candidates.push_back({static_cast<double>(bestc)});
  } else if (M == 3) {
    // Coarse 2-D scan close to the band, then local polish does the rest.
    const int stride = std::max(1, m.N / 80);
    double bestI = -1.0;
    std::vector<double> bestc;
    for (int c1 = stride; c1 < m.N - stride; c1 += stride) {
      for (int c2 = c1 + stride; c2 < m.N; c2 += stride) {
        std::vector<double> c = {static_cast<double>(c1), static_cast<double>(c2)};
        auto [H, I] = pre.eval(c);
        if (std::abs(H - target_H) <= 0.05 && I > bestI) {
          bestI = I;
          bestc = c;
        }
      }
    }
    if (!bestc.empty()) candidates.push_back(bestc);
  }

  ParetoPoint best;
  bool have = false;
  auto consider = [&](const std::vector<double>& cuts) {
    auto [H, I] = pre.eval(cuts);
    if (std::abs(H - target_H) > kRefineTol) return;
    if (!have || I > best.I) {
      best = make_point(pre, cuts, Provenance::refined);
      have = true;
    }
  };
  for (const auto& c : candidates) {
    consider(c);
    consider(polish(pre, c, target_H));
  }
  if (!have) throw infeasible_error("no binning found within the target entropy band");
  // Contract: never worse than a feasible start.
  auto [Hs, Is] = pre.eval(s0);
  if (std::abs(Hs - target_H) <= kRefineTol && best.I < Is - 1e-12)
    best = make_point(pre, s0, Provenance::refined);
  return best;
}

// ---------------------------------------------------------------------------

FrontierCurve pareto_filter(std::vector<ParetoPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].H != points[b].H) return points[a].H < points[b].H;
    return points[a].I > points[b].I;
  });
  FrontierCurve curve;
  double best_I = -std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    const ParetoPoint& p = points[idx];
    if (p.I > best_I) {
      curve.points.push_back(p);
      best_I = p.I;
    }
  }
  for (const ParetoPoint& p : curve.points)
    if (p.provenance == Provenance::corner) curve.corners.push_back(p);
  return curve;
}

FrontierCurve sweep_frontier(const MicroBinModel& m, int M_max, const std::vector<double>& H_grid,
                             int samples_per_M, std::uint64_t seed, int workers) {
  m.validate();
  if (!m.sorted) throw invalid_parameter_error("sweep requires a sorted model");
  if (M_max < 1 || M_max > m.N) throw infeasible_error("M_max must be in [1, N]");

  std::vector<ParetoPoint> all = corners_up_to(m, M_max, workers);
  const std::vector<ParetoPoint> corner_pts = all;

  for (int M = 2; M <= M_max; ++M) {
    if (samples_per_M > 0) {
      std::vector<ParetoPoint> s = sample_binnings(m, M, samples_per_M, seed, workers);
      all.insert(all.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
  }

  const std::vector<double>& grid = H_grid;
  // Refinement tasks: (H target, M) pairs for every M able to reach the target.
  std::vector<std::pair<double, int>> tasks;
  for (double h : grid)
    for (int M = 2; M <= M_max; ++M)
      if (std::log2(static_cast<double>(M)) >= h - kRefineTol && h > kRefineTol)
        tasks.emplace_back(h, M);
  std::vector<ParetoPoint> refined(tasks.size());
  std::vector<char> ok(tasks.size(), 0);
  parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto [h, M] = tasks[t];
    try {
      refined[t] = refine(m, corner_pts[static_cast<std::size_t>(M) - 1].binning, h);
      ok[t] = 1;
    } catch (const infeasible_error&) {
      ok[t] = 0;
    }
  });
  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (ok[t]) all.push_back(std::move(refined[t]));

  return pareto_filter(std::move(all));
}

// ---------------------------------------------------------------------------

namespace {

double row_conditional(const DiscreteJoint& J, std::size_t r) {
  const double m = J.P[r][0] + J.P[r][1];
  if (!(m > 0.0)) throw invalid_parameter_error("swap rows need positive mass");
  return J.P[r][0] / m;
}

}  // namespace

DiscreteJoint swap_step(const DiscreteJoint& J, std::size_t k, std::size_t l, double eps) {
  J.validate();
  if (k >= J.rows() || l >= J.rows() || k == l)
    throw invalid_parameter_error("swap needs two distinct valid rows");
  if (eps < 0.0) throw invalid_parameter_error("eps must be non-negative");
  const double pk = row_conditional(J, k);
  const double pl = row_conditional(J, l);
  if (pk == pl) throw no_gain_error("equal conditionals: swapping cannot increase I");
  // Orient so the row with the smaller conditional loses class-1 mass.
  const std::size_t lo = pk < pl ? k : l;
  const std::size_t hi = pk < pl ? l : k;
  DiscreteJoint out = J;
  out.P[lo][0] -= eps;
  out.P[lo][1] += eps;
  out.P[hi][0] += eps;
  out.P[hi][1] -= eps;
  if (out.P[lo][0] < 0.0 || out.P[hi][1] < 0.0)
    throw negativity_error("eps too large: a joint entry went negative");
  return out;
}

double swap_rate(const DiscreteJoint& J, std::size_t k, std::size_t l) {
  const double pk = row_conditional(J, k);
  const double pl = row_conditional(J, l);
  if (pk == pl) throw no_gain_error("equal conditionals: zero rate");
  if (pk <= 0.0 || pk >= 1.0 || pl <= 0.0 || pl >= 1.0)
    throw invalid_parameter_error("swap rate needs conditionals strictly inside (0,1)");
  const double a = pk < pl ? pk : pl;
  const double b = pk < pl ? pl : pk;
  return std::log2((1.0 / a - 1.0) / (1.0 / b - 1.0));
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> brute_force_frontier(const MicroBinModel& m, int M) {
  m.validate();
  if (m.N > 12 || M > 4) throw too_large_error("brute force guarded to N <= 12, M <= 4");
  if (M < 1) throw invalid_parameter_error("M must be >= 1");

  const std::size_t N = static_cast<std::size_t>(m.N);
  std::vector<int> z(N, 0);
  std::vector<std::pair<double, double>> out;
  const double total1 = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += m.mass[j] * m.p1[j];
    return s;
  }();
  const double hy = hterm(total1) + hterm(1.0 - total1);

  std::vector<double> gm(static_cast<std::size_t>(M)), g1(static_cast<std::size_t>(M));
  for (;;) {
    // Evaluate if surjective.
    std::fill(gm.begin(), gm.end(), 0.0);
    std::fill(g1.begin(), g1.end(), 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      gm[static_cast<std::size_t>(z[j])] += m.mass[j];
      g1[static_cast<std::size_t>(z[j])] += m.mass[j] * m.p1[j];
    }
    bool surjective = true;
    for (int g = 0; g < M; ++g)
      if (gm[static_cast<std::size_t>(g)] <= 0.0) surjective = false;
    if (surjective) {
      double H = 0.0, Hzy = 0.0;
      for (int g = 0; g < M; ++g) {
        const std::size_t u = static_cast<std::size_t>(g);
        H += hterm(gm[u]);
        Hzy += hterm(g1[u]) + hterm(gm[u] - g1[u]);
      }
      out.emplace_back(H, std::max(0.0, H + hy - Hzy));
    }
    // Odometer increment.
    std::size_t pos = 0;
    while (pos < N && ++z[pos] == M) z[pos++] = 0;
    if (pos == N) break;
  }
  return out;
}

std::vector<double> default_h_grid(int M_max, int size) {
  std::vector<double> grid(static_cast<std::size_t>(size));
  const double top = std::log2(static_cast<double>(std::max(2, M_max)));
  for (int i = 0; i < size; ++i)
    grid[static_cast<std::size_t>(i)] = top * (i + 1) / static_cast<double>(size);
  return grid;
}

}  // namespace paretobin
