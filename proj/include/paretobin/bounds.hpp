#pragma once

#include <vector>

#include "paretobin/frontier.hpp"
#include "paretobin/info.hpp"

namespace paretobin {

// Minimum I(Z,Y) over 2x2 joints with uniform Y marginal and total error eps:
// 1 + eps log2 eps + (1-eps) log2(1-eps). Symmetric in eps <-> 1-eps.
double fano_bound(double eps);

// max(0, H_Y - mean_loss); mean_loss is the cross-entropy in bits.
double info_lower_bound(double H_Y, double mean_loss);

struct BloatLoss {
  double bloat = 0.0;  // H - I, stored bits carrying no class information
  double loss = 0.0;   // I_XY - I, class information destroyed by compression
};

BloatLoss bloat_and_loss(const ParetoPoint& point, double I_XY);

// Encoding of a discrete variable Z in {1..m} as m-1 independent bits with
// P(B_k = 1) = P(Z = k+1) / P(Z <= k+1).
struct BitCode {
  std::vector<double> q;  // m-1 Bernoulli parameters
};

BitCode bits_encode(const ProbVector& p);

// Position of the last 1 in the bit string prefixed by a 1 (positions 1..m).
int bits_decode(const std::vector<int>& bits);

}  // namespace paretobin
