#include "paretobin/info.hpp"

#include <cmath>

#include "paretobin/errors.hpp"
#include "paretobin/parallel.hpp"

namespace paretobin {

namespace {
constexpr double kSumTol = 1e-9;
constexpr double kClamp = 1e-12;
}  // namespace

void ProbVector::validate() const {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw invalid_distribution_error("negative or NaN probability entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw invalid_distribution_error("probabilities sum to " + std::to_string(sum) +
                                     ", expected 1 within 1e-9");
}

void DiscreteJoint::validate() const {
  double sum = 0.0;
  for (const auto& row : P) {
    for (double x : row) {
      if (!(x >= 0.0)) throw invalid_distribution_error("negative or NaN joint entry");
      sum += x;
    }
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw invalid_distribution_error("joint mass sums to " + std::to_string(sum) +
                                     ", expected 1 within 1e-9");
}

ProbVector DiscreteJoint::row_marginal() const {
  ProbVector m;
  m.p.reserve(P.size());
  for (const auto& row : P) m.p.push_back(row[0] + row[1]);
  return m;
}

ProbVector DiscreteJoint::col_marginal() const {
  ProbVector m;
  m.p.resize(2, 0.0);
  for (const auto& row : P) {
    m.p[0] += row[0];
    m.p[1] += row[1];
  }
  return m;
}

double entropy(const ProbVector& p) {
  p.validate();
  std::vector<double> terms(p.p.size());
  for (std::size_t i = 0; i < p.p.size(); ++i) terms[i] = hterm(p.p[i]);
  return pairwise_sum(terms);
}

double mutual_info(const DiscreteJoint& J) {
  J.validate();
  std::vector<double> hz(J.rows()), hzy(J.rows());
  double py0 = 0.0, py1 = 0.0;
  for (std::size_t i = 0; i < J.rows(); ++i) {
    const auto& row = J.P[i];
    hz[i] = hterm(row[0] + row[1]);
    hzy[i] = hterm(row[0]) + hterm(row[1]);
    py0 += row[0];
    py1 += row[1];
  }
  double I = pairwise_sum(hz) + hterm(py0) + hterm(py1) - pairwise_sum(hzy);
  if (I < 0.0) {
    if (I < -kClamp)
      throw numeric_error("mutual information came out " + std::to_string(I) +
                          "; joint is inconsistent beyond roundoff");
    I = 0.0;
  }
  return I;
}

double conditional_entropy(const DiscreteJoint& J) {
  J.validate();
  std::vector<double> terms(J.rows());
  for (std::size_t i = 0; i < J.rows(); ++i) {
    const auto& row = J.P[i];
    terms[i] = hterm(row[0]) + hterm(row[1]) - hterm(row[0] + row[1]);
  }
  double h = pairwise_sum(terms);
  return h < 0.0 && h > -kClamp ? 0.0 : h;
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  p.validate();
  q.validate();
  if (p.p.size() != q.p.size())
    throw divergence_undefined_error("KL divergence needs equal-length distributions");
  std::vector<double> terms(p.p.size(), 0.0);
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    if (p.p[i] == 0.0) continue;
    if (q.p[i] == 0.0)
      throw divergence_undefined_error("KL divergence undefined: q has a zero where p > 0");
    terms[i] = p.p[i] * std::log2(p.p[i] / q.p[i]);
  }
  double d = pairwise_sum(terms);
  return d < 0.0 && d > -kClamp ? 0.0 : d;
}

}  // namespace paretobin
