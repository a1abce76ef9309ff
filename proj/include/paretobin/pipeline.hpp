#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "paretobin/info.hpp"
#include "paretobin/models.hpp"

namespace paretobin {

// Likelihood samples (w_i, y_i), w in [0,1], y in {1,2}.
struct SampleSet {
  std::vector<double> w;
  std::vector<int> y;

  std::size_t size() const { return w.size(); }
};

// The canonical discretized problem: N fine bins of (near-)equal mass with a
// conditional probability per bin. Everything downstream (corner search,
// frontier sweeps, the DIB baseline) consumes this.
struct MicroBinModel {
  int N = 0;
  std::vector<double> p1;           // P(Y=1 | bin j), size N
  std::vector<double> mass;         // bin masses, size N, sum 1
  bool sorted = false;
  std::vector<int> permutation;     // new position -> original bin index

  double prior1() const;            // sum_j mass_j * p1_j
  void validate() const;
};

// Delimited text with header "w,y"; '#' starts a comment line.
SampleSet ingest_samples(std::istream& in);
SampleSet ingest_samples_file(const std::string& path);

struct DensityFitResult {
  std::shared_ptr<const ExpBetaModel> model;
  FitParams class1, class2;
  double nll1 = 0.0, nll2 = 0.0;  // mean negative log-likelihood (nats)
  double prior = 0.5;             // empirical class-1 fraction
};

// Maximum-likelihood fit of the exp-polynomial-times-beta family to each
// class, multi-start simplex search (16 starts, 5e4 evaluation budget).
DensityFitResult fit_class_densities(const SampleSet& s, int degree, int workers = 0);

// W -> F(W). Returns the input unchanged when the marginal is already uniform.
std::shared_ptr<const ClassConditionalModel> uniformize(
    std::shared_ptr<const ClassConditionalModel> m);

// N equal-mass micro-bins; p1_j is the bin-averaged conditional probability.
// The construction is invariant under uniformization, so it accepts the base
// model too.
MicroBinModel fine_bin(const ClassConditionalModel& m, int N);

// Empirical path: N equal-count rank bins, per-bin class-1 frequencies.
MicroBinModel fine_bin_from_samples(const SampleSet& s, int N);

// Stable sort by increasing p1; relabeling only, H and I are untouched.
MicroBinModel sort_bins(const MicroBinModel& m);

// Joint of Y and the index of the p1(W)-threshold band ("vertical" binning).
DiscreteJoint vertical_bin(const ClassConditionalModel& m, const std::vector<double>& thresholds);

// N-1 boundaries (in the model's own W coordinate) equalizing increments of
// h_+(w) = h*[p1(w)] - h*[p2(w)]; the resulting binning loses less than 6/N
// bits for monotone p1.
std::vector<double> adaptive_bin_placement(const ClassConditionalModel& m, int N);

}  // namespace paretobin
