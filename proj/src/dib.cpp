#include "paretobin/dib.hpp"

#include <algorithm>
#include <cmath>

#include "paretobin/errors.hpp"
#include "paretobin/parallel.hpp"
#include "paretobin/rng.hpp"

namespace paretobin {

void DibConfig::validate() const {
  if (!(beta_min > 0.0) || !(beta_min < beta_max))
    throw invalid_parameter_error("need 0 < beta_min < beta_max");
  if (steps < 1 || z_max < 1 || restarts < 1)
    throw invalid_parameter_error("steps, z_max and restarts must be >= 1");
}

std::vector<double> dib_beta_grid(const DibConfig& cfg) {
  cfg.validate();
  std::vector<double> betas(static_cast<std::size_t>(cfg.steps));
  if (cfg.steps == 1) {
    betas[0] = cfg.beta_min;
    return betas;
  }
  const double ratio = std::log(cfg.beta_max / cfg.beta_min);
  for (int i = 0; i < cfg.steps; ++i)
    betas[static_cast<std::size_t>(i)] =
        cfg.beta_min * std::exp(ratio * i / static_cast<double>(cfg.steps - 1));
  return betas;
}

namespace {

constexpr double kMoveTol = 1e-12;

// Per-cluster contribution to I - beta*H (up to the constant H(Y)):
// (1-beta) h(m) - h(a) - h(m-a), with m the cluster mass and a its class-1 mass.
inline double cluster_term(double m, double a, double beta) {
  if (m <= 0.0) return 0.0;
  return (1.0 - beta) * hterm(m) - hterm(a) - hterm(std::max(0.0, m - a));
}

struct GreedyState {
  std::vector<double> gm, g1;  // cluster mass / class-1 mass
  std::vector<double> term;
  double hy = 0.0;

  double objective() const {
    double s = hy;
    for (double t : term) s += t;
    return s;
  }
};

GreedyState init_state(const MicroBinModel& m, const std::vector<int>& z, int z_max, double beta) {
  GreedyState st;
  st.gm.assign(static_cast<std::size_t>(z_max), 0.0);
  st.g1.assign(static_cast<std::size_t>(z_max), 0.0);
  st.term.assign(static_cast<std::size_t>(z_max), 0.0);
  double total1 = 0.0;
  for (int j = 0; j < m.N; ++j) {
    const std::size_t c = static_cast<std::size_t>(z[static_cast<std::size_t>(j)]);
    const std::size_t u = static_cast<std::size_t>(j);
    st.gm[c] += m.mass[u];
    st.g1[c] += m.mass[u] * m.p1[u];
    total1 += m.mass[u] * m.p1[u];
  }
  st.hy = hterm(total1) + hterm(1.0 - total1);
  for (int c = 0; c < z_max; ++c)
    st.term[static_cast<std::size_t>(c)] =
        cluster_term(st.gm[static_cast<std::size_t>(c)], st.g1[static_cast<std::size_t>(c)], beta);
  return st;
}

// Runs greedy ascent to a fixed point; returns the number of sweeps.
int greedy_ascent(const MicroBinModel& m, std::vector<int>& z, int z_max, double beta,
                  GreedyState& st, std::vector<double>* trace) {
  int sweeps = 0;
  bool improved = true;
  while (improved && sweeps < 100000) {
    improved = false;
    ++sweeps;
    for (int j = 0; j < m.N; ++j) {
      const std::size_t u = static_cast<std::size_t>(j);
      const int a = z[u];
      const std::size_t au = static_cast<std::size_t>(a);
      const double mj = m.mass[u];
      const double cj = m.mass[u] * m.p1[u];
      const double ta_new = cluster_term(st.gm[au] - mj, st.g1[au] - cj, beta);
      double best_gain = kMoveTol;
      int best_b = -1;
      for (int b = 0; b < z_max; ++b) {
        if (b == a) continue;
        const std::size_t bu = static_cast<std::size_t>(b);
        const double tb_new = cluster_term(st.gm[bu] + mj, st.g1[bu] + cj, beta);
        const double gain = (ta_new + tb_new) - (st.term[au] + st.term[bu]);
        if (gain > best_gain) {
          best_gain = gain;
          best_b = b;
        }
      }
      if (best_b >= 0) {
        const std::size_t bu = static_cast<std::size_t>(best_b);
        st.gm[au] -= mj;
        st.g1[au] -= cj;
        st.gm[bu] += mj;
        st.g1[bu] += cj;
        st.term[au] = cluster_term(st.gm[au], st.g1[au], beta);
        st.term[bu] = cluster_term(st.gm[bu], st.g1[bu], beta);
        z[u] = best_b;
        improved = true;
      }
    }
    if (trace) trace->push_back(st.objective());
  }
  return sweeps;
}

std::vector<int> restart_init(const MicroBinModel& m, int r, int z_max, std::uint64_t seed) {
  std::vector<int> z(static_cast<std::size_t>(m.N));
  if (r < z_max) {
    // Contiguous equal partition into r+1 clusters.
    const int K = r + 1;
    for (int j = 0; j < m.N; ++j)
      z[static_cast<std::size_t>(j)] =
          std::min(static_cast<int>(static_cast<long long>(j) * K / m.N), K - 1);
  } else {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    for (int j = 0; j < m.N; ++j)
      z[static_cast<std::size_t>(j)] =
          static_cast<int>(rng.next_below(static_cast<std::uint64_t>(z_max)));
  }
  return z;
}

DibSolution finish_solution(const MicroBinModel& m, std::vector<int> z, int z_max, double beta) {
  GreedyState st = init_state(m, z, z_max, beta);
  DibSolution sol;
  double H = 0.0, Hzy = 0.0;
  for (int c = 0; c < z_max; ++c) {
    const std::size_t cu = static_cast<std::size_t>(c);
    if (st.gm[cu] > 0.0) ++sol.clusters;
    H += hterm(st.gm[cu]);
    Hzy += hterm(st.g1[cu]) + hterm(std::max(0.0, st.gm[cu] - st.g1[cu]));
  }
  sol.H = H;
  sol.I = std::max(0.0, H + st.hy - Hzy);
  sol.objective = sol.I - beta * sol.H;
  sol.assignment.z = std::move(z);
  return sol;
}

}  // namespace

double dib_objective(const MicroBinModel& m, const Assignment& a, double beta, int z_max) {
  m.validate();
  if (a.z.size() != static_cast<std::size_t>(m.N))
    throw invalid_parameter_error("assignment length must equal N");
  for (int c : a.z)
    if (c < 0 || c >= z_max) throw invalid_parameter_error("cluster index out of range");
  return finish_solution(m, a.z, z_max, beta).objective;
}

DibSolution dib_optimize(const MicroBinModel& m, double beta, int restarts, std::uint64_t seed,
                         int z_max, int workers, std::vector<double>* trace) {
  m.validate();
  if (restarts < 1 || z_max < 1) throw invalid_parameter_error("restarts and z_max must be >= 1");

  std::vector<DibSolution> sols(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), workers, [&](std::size_t r) {
    std::vector<int> z = restart_init(m, static_cast<int>(r), z_max, seed);
    GreedyState st = init_state(m, z, z_max, beta);
    std::vector<double>* tr = (trace && r + 1 == static_cast<std::size_t>(restarts)) ? trace : nullptr;
    greedy_ascent(m, z, z_max, beta, st, tr);
    sols[r] = finish_solution(m, std::move(z), z_max, beta);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < sols.size(); ++r)
    if (sols[r].objective > sols[best].objective) best = r;
  return sols[best];
}

namespace {

std::vector<ParetoPoint> sweep_impl(const MicroBinModel& m, const DibConfig& cfg, int workers,
                                    bool parallel) {
  m.validate();
  cfg.validate();
  const std::vector<double> betas = dib_beta_grid(cfg);

  std::vector<DibSolution> best_per_beta(betas.size());
  if (cfg.anneal) {
    // Previous solution seeds the next beta; scan from large beta down so the
    // trivial solution destabilizes progressively.
    std::vector<int> z = restart_init(m, 0, cfg.z_max, cfg.seed);
    for (std::size_t bi = betas.size(); bi-- > 0;) {
      GreedyState st = init_state(m, z, cfg.z_max, betas[bi]);
      greedy_ascent(m, z, cfg.z_max, betas[bi], st, nullptr);
      best_per_beta[bi] = finish_solution(m, z, cfg.z_max, betas[bi]);
    }
  } else {
    const std::size_t tasks = betas.size() * static_cast<std::size_t>(cfg.restarts);
    std::vector<double> obj(tasks), Hs(tasks), Is(tasks);
    std::vector<int> ncl(tasks);
    auto body = [&](std::size_t t) {
      const std::size_t bi = t / static_cast<std::size_t>(cfg.restarts);
      const int r = static_cast<int>(t % static_cast<std::size_t>(cfg.restarts));
      std::vector<int> z = restart_init(m, r, cfg.z_max, cfg.seed);
      GreedyState st = init_state(m, z, cfg.z_max, betas[bi]);
      greedy_ascent(m, z, cfg.z_max, betas[bi], st, nullptr);
      DibSolution s = finish_solution(m, std::move(z), cfg.z_max, betas[bi]);
      obj[t] = s.objective;
      Hs[t] = s.H;
      Is[t] = s.I;
      ncl[t] = s.clusters;
    };
    if (parallel)
      parallel_for(tasks, workers, body);
    else
      for (std::size_t t = 0; t < tasks; ++t) body(t);
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
      std::size_t best = bi * static_cast<std::size_t>(cfg.restarts);
      for (std::size_t t = best + 1; t < best + static_cast<std::size_t>(cfg.restarts); ++t)
        if (obj[t] > obj[best]) best = t;
      best_per_beta[bi].objective = obj[best];
      best_per_beta[bi].H = Hs[best];
      best_per_beta[bi].I = Is[best];
      best_per_beta[bi].clusters = ncl[best];
    }
  }

  std::vector<ParetoPoint> out;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    const DibSolution& s = best_per_beta[bi];
    bool dup = false;
    for (const ParetoPoint& p : out)
      if (std::abs(p.H - s.H) < 1e-6 && std::abs(p.I - s.I) < 1e-6) {
        dup = true;
        break;
      }
    if (dup) continue;
    ParetoPoint p;
    p.H = s.H;
    p.I = s.I;
    p.M = std::max(1, s.clusters);
    p.provenance = Provenance::ba;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<ParetoPoint> dib_sweep(const MicroBinModel& m, const DibConfig& cfg, int workers) {
  return sweep_impl(m, cfg, workers, true);
}

std::vector<ParetoPoint> dib_sweep_serial(const MicroBinModel& m, const DibConfig& cfg) {
  return sweep_impl(m, cfg, 1, false);
}

}  // namespace paretobin
