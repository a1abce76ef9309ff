#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace paretobin {

// All information measures are in bits (base-2 logs), with 0*log(0) = 0.

// -x log2(x), continuous at 0.
inline double hterm(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

// Binary entropy in bits.
inline double binary_entropy(double p) { return hterm(p) + hterm(1.0 - p); }

// A discrete probability distribution. Entries must be non-negative and sum
// to 1 within 1e-9 (absolute); this module never renormalizes, so upstream
// mass-accounting bugs surface as validation errors instead of being hidden.
struct ProbVector {
  std::vector<double> p;

  void validate() const;  // throws invalid_distribution_error
};

// Joint distribution P(Z=i+1, Y=j+1) as an M x 2 matrix.
struct DiscreteJoint {
  std::vector<std::array<double, 2>> P;

  std::size_t rows() const { return P.size(); }
  void validate() const;  // throws invalid_distribution_error

  ProbVector row_marginal() const;  // P(Z=i)
  ProbVector col_marginal() const;  // P(Y=j)
};

// Shannon entropy H(p) in bits.
double entropy(const ProbVector& p);

// I(Z,Y) = H(Z) + H(Y) - H(Z,Y), clamped to 0 against sub-1e-12 roundoff.
double mutual_info(const DiscreteJoint& J);

// H(Y|Z) = H(Z,Y) - H(Z).
double conditional_entropy(const DiscreteJoint& J);

// KL(p || q) in bits; requires support(p) within support(q).
double kl_divergence(const ProbVector& p, const ProbVector& q);

}  // namespace paretobin
