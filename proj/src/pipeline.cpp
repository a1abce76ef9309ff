#include "paretobin/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "paretobin/errors.hpp"
#include "paretobin/optimize.hpp"
#include "paretobin/parallel.hpp"
#include "paretobin/quadrature.hpp"
#include "paretobin/rng.hpp"

namespace paretobin {

double MicroBinModel::prior1() const {
  std::vector<double> terms(p1.size());
  for (std::size_t j = 0; j < p1.size(); ++j) terms[j] = mass[j] * p1[j];
  return pairwise_sum(terms);
}

void MicroBinModel::validate() const {
  if (N <= 0 || p1.size() != static_cast<std::size_t>(N) || mass.size() != p1.size())
    throw invalid_parameter_error("micro-bin model has inconsistent sizes");
  double s = pairwise_sum(mass);
  if (std::abs(s - 1.0) > 1e-9)
    throw invalid_distribution_error("micro-bin masses sum to " + std::to_string(s));
  for (double p : p1)
    if (!(p >= 0.0) || !(p <= 1.0))
      throw invalid_distribution_error("micro-bin conditional outside [0,1]");
  if (sorted && !std::is_sorted(p1.begin(), p1.end()))
    throw invalid_distribution_error("model flagged sorted but p1 is not non-decreasing");
}

// ---------------------------------------------------------------------------

SampleSet ingest_samples(std::istream& in) {
  SampleSet s;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    if (!header_seen) {
      std::string h = line.substr(start);
      h.erase(std::remove_if(h.begin(), h.end(),
                             [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
              h.end());
      if (h != "w,y") throw parse_error("expected header \"w,y\", got \"" + line + "\"", line_no);
      header_seen = true;
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw parse_error("missing comma in sample row", line_no);
    double w;
    long yv;
    try {
      std::size_t used = 0;
      w = std::stod(line.substr(start, comma - start), &used);
      yv = std::stol(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw parse_error("malformed sample row \"" + line + "\"", line_no);
    }
    if (!(w >= 0.0 && w <= 1.0)) throw parse_error("w outside [0,1]", line_no);
    if (yv != 1 && yv != 2) throw parse_error("class label must be 1 or 2", line_no);
    s.w.push_back(w);
    s.y.push_back(static_cast<int>(yv));
  }
  if (!header_seen || s.size() == 0) throw parse_error("empty input: no sample rows");
  return s;
}

SampleSet ingest_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open samples file: " + path);
  return ingest_samples(in);
}

// ---------------------------------------------------------------------------

namespace {

struct SuffStats {
  std::vector<double> wk_mean;  // mean of w^k, k = 1..d
  double logw_mean = 0.0;
  double log1w_mean = 0.0;
  std::size_t n = 0;
};

SuffStats suff_stats(const std::vector<double>& w, int degree) {
  SuffStats st;
  st.n = w.size();
  st.wk_mean.assign(static_cast<std::size_t>(degree), 0.0);
  for (double wi : w) {
    const double wc = std::clamp(wi, 1e-10, 1.0 - 1e-10);
    double pw = 1.0;
    for (int k = 1; k <= degree; ++k) {
      pw *= wc;
      st.wk_mean[static_cast<std::size_t>(k - 1)] += pw;
    }
    st.logw_mean += std::log(wc);
    st.log1w_mean += std::log1p(-wc);
  }
  const double inv = 1.0 / static_cast<double>(st.n);
  for (double& m : st.wk_mean) m *= inv;
  st.logw_mean *= inv;
  st.log1w_mean *= inv;
  return st;
}

// Mean NLL (nats) of the family member with free parameters
// x = (a_1..a_d, e_w, e_1w); a_0 is the normalizer.
double fit_objective(const std::vector<double>& x, const SuffStats& st, int degree) {
  const double e1 = x[static_cast<std::size_t>(degree)];
  const double e2 = x[static_cast<std::size_t>(degree) + 1];
  if (e1 <= -0.999 || e2 <= -0.999 || std::abs(e1) > 40 || std::abs(e2) > 40) return 1e12;
  for (int k = 0; k < degree; ++k)
    if (std::abs(x[static_cast<std::size_t>(k)]) > 400) return 1e12;

  auto g = [&](double w) {
    double p = 0.0;
    for (int k = degree; k >= 1; --k) p = (p + x[static_cast<std::size_t>(k - 1)]) * w;
    return p + e1 * std::log(w) + e2 * std::log1p(-w);
  };
  // Overflow guard: pull the max of g out of the integral.
  double gmax = -1e300;
  for (int i = 1; i < 64; ++i) gmax = std::max(gmax, g(i / 64.0));
  double z;
  try {
    z = integrate([&](double w) { return std::exp(std::min(g(w) - gmax, 700.0)); }, 0.0, 1.0,
                  1e-9, 2000);
  } catch (const numeric_error&) {
    return 1e12;
  }
  if (!(z > 0.0) || !std::isfinite(z)) return 1e12;
  const double log_z = gmax + std::log(z);

  double data_term = e1 * st.logw_mean + e2 * st.log1w_mean;
  for (int k = 1; k <= degree; ++k)
    data_term += x[static_cast<std::size_t>(k - 1)] * st.wk_mean[static_cast<std::size_t>(k - 1)];
  return -data_term + log_z;
}

struct ClassFit {
  FitParams params;
  double nll = 0.0;
  bool converged = false;
};

ClassFit fit_one_class(const std::vector<double>& w, int degree, int workers) {
  const SuffStats st = suff_stats(w, degree);
  const int n_free = degree + 2;
  const int n_starts = 16;
  const int evals_per_start = 50000 / n_starts;

  std::vector<NelderMeadResult> results(n_starts);
  parallel_for(n_starts, workers, [&](std::size_t r) {
    std::vector<double> x0(static_cast<std::size_t>(n_free), 0.0);
    if (r > 0) {
      SplitMix64 rng(derive_seed(0x6d1f5b4e9a2c7031ull, r));
      for (int k = 0; k < degree; ++k)
        x0[static_cast<std::size_t>(k)] = (rng.next_double() - 0.5) * 8.0;
      x0[static_cast<std::size_t>(degree)] = rng.next_double() * 2.0 - 0.8;
      x0[static_cast<std::size_t>(degree) + 1] = rng.next_double() * 2.0 - 0.8;
    }
    std::vector<double> step(static_cast<std::size_t>(n_free), 0.5);
    NelderMeadOptions opts;
    opts.max_evals = evals_per_start;
    opts.xtol = 1e-7;
    opts.ftol = 1e-10;
    results[r] = nelder_mead([&](const std::vector<double>& x) { return fit_objective(x, st, degree); },
                             x0, step, opts);
  });

  int best = 0;
  for (int r = 1; r < n_starts; ++r)
    if (results[r].fx < results[best].fx) best = r;

  ClassFit out;
  out.nll = results[best].fx;
  out.converged = results[best].converged;
  FitParams par;
  par.degree = degree;
  par.a.assign(static_cast<std::size_t>(degree) + 3, 0.0);
  for (int k = 1; k <= degree; ++k)
    par.a[static_cast<std::size_t>(k)] = results[best].x[static_cast<std::size_t>(k - 1)];
  par.a[static_cast<std::size_t>(degree) + 1] = results[best].x[static_cast<std::size_t>(degree)];
  par.a[static_cast<std::size_t>(degree) + 2] = results[best].x[static_cast<std::size_t>(degree) + 1];
  out.params = normalize_fit(par);
  return out;
}

}  // namespace

DensityFitResult fit_class_densities(const SampleSet& s, int degree, int workers) {
  if (degree < 0) throw invalid_parameter_error("degree must be non-negative");
  std::vector<double> w1, w2;
  for (std::size_t i = 0; i < s.size(); ++i) (s.y[i] == 1 ? w1 : w2).push_back(s.w[i]);
  const std::size_t need = static_cast<std::size_t>(degree) + 3;
  if (w1.size() < need || w2.size() < need)
    throw insufficient_samples_error("each class needs at least degree+3 samples");

  ClassFit f1 = fit_one_class(w1, degree, workers);
  ClassFit f2 = fit_one_class(w2, degree, workers);
  if (!f1.converged || !f2.converged)
    throw fit_failed_error("density fit did not converge within budget",
                           std::max(f1.nll, f2.nll));

  DensityFitResult res;
  res.class1 = f1.params;
  res.class2 = f2.params;
  res.nll1 = f1.nll;
  res.nll2 = f2.nll;
  res.prior = static_cast<double>(w1.size()) / static_cast<double>(s.size());
  res.model = std::make_shared<ExpBetaModel>(res.class1, res.class2, res.prior);
  return res;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const ClassConditionalModel> uniformize(
    std::shared_ptr<const ClassConditionalModel> m) {
  if (!m) throw invalid_parameter_error("uniformize: null model");
  if (std::dynamic_pointer_cast<const UniformizedModel>(m)) return m;
  bool already_uniform = true;
  for (int i = 0; i <= 16; ++i) {
    const double u = i / 16.0;
    if (std::abs(m->marginal_cdf(u) - u) > 1e-10) {
      already_uniform = false;
      break;
    }
  }
  if (already_uniform) return m;
  return std::make_shared<UniformizedModel>(std::move(m));
}

MicroBinModel fine_bin(const ClassConditionalModel& m, int N) {
  if (N < 2) throw invalid_parameter_error("fine_bin needs N >= 2");
  // Equal-mass bins are invariant under uniformization; peel the wrapper so
  // edge inversion runs on the cheap base CDF.
  const ClassConditionalModel* eff = &m;
  if (const auto* u = dynamic_cast<const UniformizedModel*>(&m)) {
    // inverse_cdf(j/N) on the wrapper equals the base edge directly.
    eff = nullptr;
    MicroBinModel out;
    out.N = N;
    out.p1.resize(static_cast<std::size_t>(N));
    out.mass.assign(static_cast<std::size_t>(N), 1.0 / N);
    out.permutation.resize(static_cast<std::size_t>(N));
    std::iota(out.permutation.begin(), out.permutation.end(), 0);
    double prev = 0.0;
    for (int j = 1; j <= N; ++j) {
      double c1;
      try {
        c1 = u->class_cdf(1, static_cast<double>(j) / N);
      } catch (const std::exception& e) {
        throw numeric_error("fine_bin failed at bin " + std::to_string(j) + ": " + e.what());
      }
      out.p1[static_cast<std::size_t>(j - 1)] = std::clamp((c1 - prev) * N, 0.0, 1.0);
      prev = c1;
    }
    return out;
  }

  MicroBinModel out;
  out.N = N;
  out.p1.resize(static_cast<std::size_t>(N));
  out.mass.assign(static_cast<std::size_t>(N), 1.0 / N);
  out.permutation.resize(static_cast<std::size_t>(N));
  std::iota(out.permutation.begin(), out.permutation.end(), 0);

  double prev_edge = 0.0;
  double prev_c1 = 0.0;
  for (int j = 1; j <= N; ++j) {
    double edge = 1.0, c1 = 1.0;
    try {
      edge = j == N ? 1.0
                    : invert_increasing([&](double w) { return eff->marginal_cdf(w); },
                                        static_cast<double>(j) / N, prev_edge, 1.0);
      c1 = eff->class_cdf(1, edge);
    } catch (const std::exception& e) {
      throw numeric_error("fine_bin failed at bin " + std::to_string(j) + ": " + e.what());
    }
    out.p1[static_cast<std::size_t>(j - 1)] = std::clamp((c1 - prev_c1) * N, 0.0, 1.0);
    prev_edge = edge;
    prev_c1 = c1;
  }
  return out;
}

MicroBinModel fine_bin_from_samples(const SampleSet& s, int N) {
  if (N < 1) throw invalid_parameter_error("fine_bin_from_samples needs N >= 1");
  const std::size_t n = s.size();
  if (n < static_cast<std::size_t>(N))
    throw insufficient_samples_error("need at least N samples for N rank bins");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.w[a] < s.w[b]; });

  MicroBinModel out;
  out.N = N;
  out.p1.resize(static_cast<std::size_t>(N));
  out.mass.resize(static_cast<std::size_t>(N));
  out.permutation.resize(static_cast<std::size_t>(N));
  std::iota(out.permutation.begin(), out.permutation.end(), 0);

  const std::size_t base = n / static_cast<std::size_t>(N);
  const std::size_t extra = n % static_cast<std::size_t>(N);
  std::size_t pos = 0;
  for (int j = 0; j < N; ++j) {
    const std::size_t count = base + (static_cast<std::size_t>(j) < extra ? 1 : 0);
    std::size_t ones = 0;
    for (std::size_t k = 0; k < count; ++k)
      if (s.y[order[pos + k]] == 1) ++ones;
    out.p1[static_cast<std::size_t>(j)] = static_cast<double>(ones) / static_cast<double>(count);
    out.mass[static_cast<std::size_t>(j)] = static_cast<double>(count) / static_cast<double>(n);
    pos += count;
  }
  return out;
}

MicroBinModel sort_bins(const MicroBinModel& m) {
  m.validate();
  std::vector<int> order(static_cast<std::size_t>(m.N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return m.p1[static_cast<std::size_t>(a)] < m.p1[static_cast<std::size_t>(b)];
  });

  MicroBinModel out;
  out.N = m.N;
  out.sorted = true;
  out.p1.resize(m.p1.size());
  out.mass.resize(m.mass.size());
  out.permutation.resize(m.p1.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int src = order[i];
    out.p1[i] = m.p1[static_cast<std::size_t>(src)];
    out.mass[i] = m.mass[static_cast<std::size_t>(src)];
    out.permutation[i] = m.permutation[static_cast<std::size_t>(src)];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Maximal monotone runs of values sampled on a grid; returns segment index
// ranges [begin, end] into the grid.
std::vector<std::pair<std::size_t, std::size_t>> monotone_runs(const std::vector<double>& v) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  int dir = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    int s = d > 1e-14 ? 1 : (d < -1e-14 ? -1 : 0);
    if (s == 0) continue;
    if (dir == 0) {
      dir = s;
    } else if (s != dir) {
      runs.emplace_back(start, i - 1);
      start = i - 1;
      dir = s;
    }
  }
  runs.emplace_back(start, v.size() - 1);
  return runs;
}

}  // namespace

DiscreteJoint vertical_bin(const ClassConditionalModel& m, const std::vector<double>& thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double lo = i == 0 ? 0.0 : thresholds[i - 1];
    if (!(thresholds[i] > lo) || !(thresholds[i] < 1.0))
      throw invalid_binning_error("thresholds must be strictly increasing inside (0,1)");
  }
  const std::size_t bands = thresholds.size() + 1;
  auto band_of = [&](double p) {
    return static_cast<std::size_t>(
        std::upper_bound(thresholds.begin(), thresholds.end(), p) - thresholds.begin());
  };

  const std::size_t G = 4096;
  const double eps = 1e-9;
  std::vector<double> grid(G + 1), pvals(G + 1);
  for (std::size_t i = 0; i <= G; ++i) {
    grid[i] = eps + (1.0 - 2.0 * eps) * static_cast<double>(i) / static_cast<double>(G);
    pvals[i] = m.cond_prob(grid[i]);
  }

  DiscreteJoint J;
  J.P.assign(bands, {0.0, 0.0});
  auto add_interval = [&](double lo, double hi, std::size_t band) {
    if (hi <= lo) return;
    J.P[band][0] += m.joint_cdf(1, hi) - m.joint_cdf(1, lo);
    J.P[band][1] += m.joint_cdf(2, hi) - m.joint_cdf(2, lo);
  };

  for (const auto& [b0, b1] : monotone_runs(pvals)) {
    double seg_lo = b0 == 0 ? 0.0 : grid[b0];
    double seg_hi = b1 == G ? 1.0 : grid[b1];
    const bool increasing = pvals[b1] >= pvals[b0];
    // Threshold crossings inside this run, in w order.
    std::vector<double> splits;
    for (double t : thresholds) {
      const double pl = std::min(pvals[b0], pvals[b1]);
      const double ph = std::max(pvals[b0], pvals[b1]);
      if (t <= pl || t > ph) continue;
      double root = invert_increasing(
          [&](double w) { return increasing ? m.cond_prob(w) : -m.cond_prob(w); },
          increasing ? t : -t, grid[b0], grid[b1]);
      splits.push_back(root);
    }
    std::sort(splits.begin(), splits.end());
    double lo = seg_lo;
    for (std::size_t k = 0; k <= splits.size(); ++k) {
      const double hi = k < splits.size() ? splits[k] : seg_hi;
      const double mid = 0.5 * (lo + hi);
      add_interval(lo, hi, band_of(m.cond_prob(std::clamp(mid, eps, 1.0 - eps))));
      lo = hi;
    }
  }
  // Clip accumulated roundoff so the joint validates.
  for (auto& row : J.P)
    for (double& x : row) x = std::max(0.0, x);
  return J;
}

// ---------------------------------------------------------------------------

namespace {

// h*(x): the monotone rearrangement of h(x) = -x log2 x.
double hstar(double x) {
  const double inv_e = 1.0 / std::numbers::e;
  if (x < inv_e) return hterm(x);
  return 2.0 * hterm(inv_e) - hterm(x);
}

}  // namespace

std::vector<double> adaptive_bin_placement(const ClassConditionalModel& m, int N) {
  if (N < 1) throw invalid_parameter_error("adaptive_bin_placement needs N >= 1");

  // The increment-equalization bound assumes a uniform marginal, so work in
  // uniformized coordinates and map boundaries back at the end.
  std::shared_ptr<const ClassConditionalModel> holder;
  const UniformizedModel* uni = dynamic_cast<const UniformizedModel*>(&m);
  const ClassConditionalModel* um = &m;
  bool wrapped = false;
  if (!uni) {
    bool uniform = true;
    for (int i = 1; i < 16 && uniform; ++i)
      uniform = std::abs(m.marginal_cdf(i / 16.0) - i / 16.0) < 1e-10;
    if (!uniform) {
      // Non-owning alias: the caller's model must outlive this call anyway.
      holder = std::shared_ptr<const ClassConditionalModel>(&m, [](const ClassConditionalModel*) {});
      holder = std::make_shared<UniformizedModel>(holder);
      uni = static_cast<const UniformizedModel*>(holder.get());
      um = holder.get();
      wrapped = true;
    }
  }

  const double eps = 1e-9;
  auto hplus = [&](double u) {
    const double p = um->cond_prob(std::clamp(u, eps, 1.0 - eps));
    return hstar(p) - hstar(1.0 - p);
  };

  const std::size_t G = 2048;
  std::vector<double> hv(G + 1);
  for (std::size_t i = 0; i <= G; ++i) hv[i] = hplus(static_cast<double>(i) / G);

  auto runs = monotone_runs(hv);
  std::vector<double> boundaries_u;
  boundaries_u.reserve(static_cast<std::size_t>(N));

  double total_range = 0.0;
  for (const auto& [a, b] : runs) total_range += std::abs(hv[b] - hv[a]);
  if (total_range < 1e-14) {
    // Constant conditional: any placement is lossless; use equispaced bins.
    for (int j = 1; j < N; ++j) boundaries_u.push_back(static_cast<double>(j) / N);
  } else {
    // Bins per monotone segment, proportional to its h_+ range.
    std::vector<int> alloc(runs.size(), 1);
    int assigned = static_cast<int>(runs.size());
    if (assigned > N) throw numeric_error("more direction changes than bins requested");
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double share = std::abs(hv[runs[r].second] - hv[runs[r].first]) / total_range;
      const int want = static_cast<int>(std::floor(share * (N - static_cast<int>(runs.size()))));
      alloc[r] += want;
      assigned += want;
    }
    for (std::size_t r = 0; assigned < N; r = (r + 1) % runs.size()) {
      ++alloc[r];
      ++assigned;
    }
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double ua = static_cast<double>(runs[r].first) / G;
      const double ub = static_cast<double>(runs[r].second) / G;
      if (r > 0) boundaries_u.push_back(ua);
      const double ha = hv[runs[r].first], hb2 = hv[runs[r].second];
      const bool inc = hb2 >= ha;
      for (int j = 1; j < alloc[r]; ++j) {
        const double target = ha + (hb2 - ha) * static_cast<double>(j) / alloc[r];
        double u = invert_increasing(
            [&](double x) { return inc ? hplus(x) : -hplus(x); }, inc ? target : -target, ua, ub);
        boundaries_u.push_back(u);
      }
    }
  }

  std::sort(boundaries_u.begin(), boundaries_u.end());
  std::vector<double> out;
  out.reserve(boundaries_u.size());
  double prev = 0.0;
  for (double u : boundaries_u) {
    double w = wrapped ? uni->inverse_cdf(u) : u;
    if (w <= prev || w >= 1.0) continue;  // drop collapsed boundaries
    out.push_back(w);
    prev = w;
  }
  return out;
}

}  // namespace paretobin
