#include "paretobin/bounds.hpp"

#include <cmath>

#include "paretobin/errors.hpp"

namespace paretobin {

double fano_bound(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw invalid_parameter_error("error rate outside [0,1]");
  return 1.0 - binary_entropy(eps);
}

double info_lower_bound(double H_Y, double mean_loss) {
  if (!(mean_loss >= 0.0)) throw invalid_parameter_error("mean loss must be non-negative");
  return std::max(0.0, H_Y - mean_loss);
}

BloatLoss bloat_and_loss(const ParetoPoint& point, double I_XY) {
  if (point.I < 0.0 || point.H < point.I - 1e-9)
    throw inconsistent_inputs_error("point has I > H: not a valid compression point");
  if (I_XY < point.I - 1e-9)
    throw inconsistent_inputs_error("I_XY below the point's I: inconsistent inputs");
  BloatLoss r;
  r.bloat = std::max(0.0, point.H - point.I);
  r.loss = std::max(0.0, I_XY - point.I);
  return r;
}

BitCode bits_encode(const ProbVector& p) {
  p.validate();
  const std::size_t m = p.p.size();
  BitCode code;
  if (m <= 1) return code;
  code.q.resize(m - 1);
  double cum = p.p[0];
  for (std::size_t k = 1; k < m; ++k) {
    cum += p.p[k];
    code.q[k - 1] = cum > 0.0 ? p.p[k] / cum : 0.0;
  }
  return code;
}

int bits_decode(const std::vector<int>& bits) {
  for (int b : bits)
    if (b != 0 && b != 1) throw invalid_parameter_error("bit vector entries must be 0 or 1");
  int last = 1;  // the prefixed 1 occupies position 1
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k] == 1) last = static_cast<int>(k) + 2;
  return last;
}

}  // namespace paretobin
