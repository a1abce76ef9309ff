#pragma once

#include <array>
#include <memory>
#include <vector>

#include "paretobin/info.hpp"
#include "paretobin/quadrature.hpp"

namespace paretobin {

// ---------------------------------------------------------------------------
// Closed forms for the analytic warmup distribution: X = (x1, x2) on the unit
// square with density 2*x1*x2 for class 1 and 2*(1-x1)*(1-x2) for class 2, and
// the likelihood variable W = P(Y=1 | X).
// ---------------------------------------------------------------------------
namespace toy {

// W(x1, x2); the indeterminate corner (denominator 0) returns 1/2.
double w_of(double x1, double x2);

// Joint CDF F_y(w) = P(W < w, Y = y); F_1(1) = F_2(1) = 1/2.
double joint_cdf(double w, int y);

// Joint density f_1(w) = F_1'(w); f_2(w) = f_1(1-w). Log-divergent at w=1.
double class1_density(double w);

// I(X,Y) = 1 - (pi^2 - 4) / (16 ln 2), about 0.470747 bits.
double mutual_info_closed_form();

// Joint of Y and Z = bin index of W for boundaries 0 < b_1 < ... < b_{M-1} < 1.
DiscreteJoint binned_joint(const std::vector<double>& boundaries);

}  // namespace toy

// ---------------------------------------------------------------------------
// Parametric density families fitted to classifier likelihood outputs.
// ---------------------------------------------------------------------------

// f(w, a) = exp(sum_{k=0..d} a_k w^k) * w^{a_{d+1}} * (1-w)^{a_{d+2}}.
struct FitParams {
  std::vector<double> a;  // size degree + 3
  int degree = 0;

  double poly_exp() const;  // a_{d+1}
  double one_minus_exp() const;
};

double fit_density_eval(const FitParams& a, double w);

// Shifts a_0 so the density integrates to 1 over (0,1); throws
// non_normalizable_error when an endpoint exponent is <= -1.
FitParams normalize_fit(const FitParams& a);

// Piecewise CDF family for distributions extremely peaked at the endpoints.
// Branch A carries the mixing weight a0; branch B shares it. The last
// coefficient of G is derived from the printed continuity constraint. flip
// models densities reported as f(1-w).
struct CifarFitParams {
  std::array<double, 6> branch_a{};  // a0 (weight), a1..a5
  std::array<double, 5> branch_b{};  // a1..a5
  bool flip = false;
};

double cifar_cdf_eval(const CifarFitParams& p, double w);

// ---------------------------------------------------------------------------
// A binary class-conditional model of (W, Y): per-class CDFs/densities plus a
// class prior. Immutable after construction; all evaluation is const.
// ---------------------------------------------------------------------------
class ClassConditionalModel {
 public:
  virtual ~ClassConditionalModel() = default;

  virtual double prior1() const = 0;                         // P(Y=1)
  virtual double class_cdf(int y, double w) const = 0;       // P(W<=w | Y=y)
  virtual double class_density(int y, double w) const = 0;   // per-class density

  double joint_cdf(int y, double w) const;     // P(W<=w, Y=y)
  double marginal_cdf(double w) const;         // P(W<=w)
  double marginal_density(double w) const;

  // P(Y=1 | W=w); throws undefined_conditional_error where the marginal
  // density vanishes.
  virtual double cond_prob(double w) const;
};

double conditional_prob(const ClassConditionalModel& m, double w);

class AnalyticToyModel final : public ClassConditionalModel {
 public:
  double prior1() const override { return 0.5; }
  double class_cdf(int y, double w) const override;
  double class_density(int y, double w) const override;
  double cond_prob(double w) const override { return std::min(1.0, std::max(0.0, w)); }
};

class ExpBetaModel final : public ClassConditionalModel {
 public:
  // Parameters are renormalized on construction; pass prior = P(Y=1).
  ExpBetaModel(FitParams f1, FitParams f2, double prior);

  double prior1() const override { return prior_; }
  double class_cdf(int y, double w) const override;
  double class_density(int y, double w) const override;

  const FitParams& params(int y) const { return y == 1 ? f1_ : f2_; }

 private:
  FitParams f1_, f2_;
  double prior_;
  CachedCdf cdf1_, cdf2_;
};

class CifarCdfModel final : public ClassConditionalModel {
 public:
  CifarCdfModel(CifarFitParams c1, CifarFitParams c2, double prior);

  double prior1() const override { return prior_; }
  double class_cdf(int y, double w) const override;
  // Numeric central difference of the closed-form CDF.
  double class_density(int y, double w) const override;

 private:
  CifarFitParams c1_, c2_;
  double prior_;
};

// Model of W' = F(W): uniform marginal on [0,1], same mutual information.
// The CDF inversion is the monotone pseudo-inverse (flat regions map to their
// left edge).
class UniformizedModel final : public ClassConditionalModel {
 public:
  explicit UniformizedModel(std::shared_ptr<const ClassConditionalModel> base);

  double prior1() const override { return base_->prior1(); }
  double class_cdf(int y, double u) const override;
  double class_density(int y, double u) const override;
  double cond_prob(double u) const override;

  double inverse_cdf(double u) const;  // maps uniform coordinate back to W

 private:
  std::shared_ptr<const ClassConditionalModel> base_;
};

}  // namespace paretobin
