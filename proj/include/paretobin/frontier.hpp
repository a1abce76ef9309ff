#pragma once

#include <string>
#include <utility>
#include <vector>

#include "paretobin/info.hpp"
#include "paretobin/pipeline.hpp"

namespace paretobin {

// Cut positions in micro-bin units, strictly increasing inside (0, N).
// Integer values select whole micro-bins; fractional values (refined mode)
// split a micro-bin, interpolating its mass and class mass linearly.
struct ContiguousBinning {
  std::vector<double> cuts;

  std::size_t groups() const { return cuts.size() + 1; }
};

enum class Provenance { corner, sampled, refined, ba };

const char* provenance_name(Provenance p);

struct ParetoPoint {
  double H = 0.0;
  double I = 0.0;
  int M = 1;
  ContiguousBinning binning;
  Provenance provenance = Provenance::sampled;
};

struct FrontierCurve {
  std::vector<ParetoPoint> points;   // non-dominated, sorted by H
  std::vector<ParetoPoint> corners;  // the subset with corner provenance

  // Piecewise-linear interpolation of I at a given H (clamped outside range).
  double interp_I(double H) const;
};

struct BinningEval {
  DiscreteJoint joint;
  double H = 0.0;
  double I = 0.0;
};

// Aggregates micro-bins into groups and evaluates (joint, H, I).
BinningEval eval_binning(const MicroBinModel& m, const ContiguousBinning& b);

// Max-I contiguous binning into exactly M groups, by exact dynamic
// programming over cut positions (O(N^2 M) with prefix sums). Requires a
// sorted model. The parallel version distributes DP rows over workers and is
// bit-identical to the serial reference.
ParetoPoint corner(const MicroBinModel& m, int M, int workers = 0);
ParetoPoint corner_serial(const MicroBinModel& m, int M);

// One DP pass shared across all group counts 1..M_max.
std::vector<ParetoPoint> corners_up_to(const MicroBinModel& m, int M_max, int workers = 0);

// Uniformly random strictly increasing cut vectors (distinct sorted indices),
// deterministic for a given seed and independent of the worker count.
std::vector<ParetoPoint> sample_binnings(const MicroBinModel& m, int M, int count,
                                         std::uint64_t seed, int workers = 0);
std::vector<ParetoPoint> sample_binnings_serial(const MicroBinModel& m, int M, int count,
                                                std::uint64_t seed);

// Local maximization of I subject to |H - target_H| <= 1e-4 over real-valued
// cuts, seeded from `start` plus deterministic interpolation paths.
ParetoPoint refine(const MicroBinModel& m, const ContiguousBinning& start, double target_H);

// Corners + random samples + refined points at each grid H, Pareto-filtered.
FrontierCurve sweep_frontier(const MicroBinModel& m, int M_max, const std::vector<double>& H_grid,
                             int samples_per_M, std::uint64_t seed, int workers = 0);

// Non-dominated subset under (maximize I, minimize H), stable order by H.
FrontierCurve pareto_filter(std::vector<ParetoPoint> points);

// Moves eps of probability between rows k and l (0-based) so their
// conditionals separate; both marginals stay fixed.
DiscreteJoint swap_step(const DiscreteJoint& J, std::size_t k, std::size_t l, double eps);

// Closed-form dI/deps at eps = 0 for the oriented swap, always positive.
double swap_rate(const DiscreteJoint& J, std::size_t k, std::size_t l);

// Every surjective assignment of N micro-bins to M groups (contiguous or
// not), evaluated; guarded to N <= 12, M <= 4.
std::vector<std::pair<double, double>> brute_force_frontier(const MicroBinModel& m, int M);

// Default frontier H grid: `size` equispaced targets on [0, log2(M_max)].
std::vector<double> default_h_grid(int M_max, int size = 200);

}  // namespace paretobin
