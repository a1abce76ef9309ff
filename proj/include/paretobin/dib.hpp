#pragma once

#include <cstdint>
#include <vector>

#include "paretobin/frontier.hpp"
#include "paretobin/pipeline.hpp"

namespace paretobin {

struct DibConfig {
  double beta_min = 1e-10;
  double beta_max = 1.0;
  int steps = 20000;   // logarithmically equispaced
  int z_max = 8;
  int restarts = 10;
  std::uint64_t seed = 0;
  bool anneal = false;  // seed each beta from the previous solution instead of fresh inits

  void validate() const;
};

// Micro-bin -> cluster map, clusters in [0, z_max). Not necessarily contiguous.
struct Assignment {
  std::vector<int> z;
};

// L = I(Z,Y) - beta * H(Z) for the aggregated joint.
double dib_objective(const MicroBinModel& m, const Assignment& a, double beta, int z_max = 8);

struct DibSolution {
  Assignment assignment;
  double H = 0.0;
  double I = 0.0;
  double objective = 0.0;
  int clusters = 0;  // non-empty clusters
};

// Greedy coordinate ascent: repeatedly reassign each micro-bin to the cluster
// maximizing the global objective until no move improves it by > 1e-12.
// Restart inits are deterministic contiguous partitions into 1..z_max
// clusters, then seeded random assignments; best objective wins (ties to the
// lowest restart index). `trace`, when given, records the objective after
// every sweep of the last restart executed.
DibSolution dib_optimize(const MicroBinModel& m, double beta, int restarts, std::uint64_t seed,
                         int z_max = 8, int workers = 0, std::vector<double>* trace = nullptr);

// Scans the beta grid and returns the deduplicated (1e-6 on both H and I)
// point set, ordered by beta. Fresh mode shares the same restart inits across
// all betas and parallelizes the (beta, restart) grid; anneal mode is
// sequential by construction.
std::vector<ParetoPoint> dib_sweep(const MicroBinModel& m, const DibConfig& cfg, int workers = 0);
std::vector<ParetoPoint> dib_sweep_serial(const MicroBinModel& m, const DibConfig& cfg);

// The beta grid a config expands to.
std::vector<double> dib_beta_grid(const DibConfig& cfg);

}  // namespace paretobin
