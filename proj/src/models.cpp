#include "paretobin/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paretobin/errors.hpp"

namespace paretobin {

namespace toy {

namespace {

// Taylor coefficients around w = 1/2 (t = w - 1/2); direct evaluation of the
// closed forms loses all precision there because of the (2w-1)^4 denominator.
constexpr double kF1Series[] = {1.0 / 12, 4.0 / 15,  4.0 / 15,  32.0 / 105,
                                16.0 / 35, 64.0 / 105, 64.0 / 63, 1024.0 / 693};
constexpr double kf1Series[] = {4.0 / 15, 8.0 / 15, 32.0 / 35, 64.0 / 35,
                                64.0 / 21, 128.0 / 21, 1024.0 / 99};
constexpr double kSeriesWindow = 1e-3;

double horner(const double* c, int n, double t) {
  double s = 0.0;
  for (int k = n - 1; k >= 0; --k) s = s * t + c[k];
  return s;
}

double f1_cdf(double w) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 0.5;
  const double t = w - 0.5;
  if (std::abs(t) < kSeriesWindow) return horner(kF1Series, 8, t);
  const double d = 2.0 * w - 1.0;
  const double num = w * w * (d * (5.0 - 4.0 * w) + 2.0 * (1.0 - w * w) * std::log(1.0 / w - 1.0));
  return num / (2.0 * d * d * d * d);
}

}  // namespace

double w_of(double x1, double x2) {
  if (x1 < 0.0 || x1 > 1.0 || x2 < 0.0 || x2 > 1.0)
    throw invalid_parameter_error("toy w(x1,x2) needs inputs in the unit square");
  const double num = x1 * x2;
  const double den = num + (1.0 - x1) * (1.0 - x2);
  if (den == 0.0) return 0.5;
  return num / den;
}

double joint_cdf(double w, int y) {
  if (y != 1 && y != 2) throw invalid_parameter_error("class label must be 1 or 2");
  if (w < 0.0 || w > 1.0) throw invalid_parameter_error("toy CDF argument outside [0,1]");
  return y == 1 ? f1_cdf(w) : 0.5 - f1_cdf(1.0 - w);
}

double class1_density(double w) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return std::numeric_limits<double>::infinity();
  const double t = w - 0.5;
  if (std::abs(t) < kSeriesWindow) return horner(kf1Series, 7, t);
  const double d = 2.0 * w - 1.0;
  const double num =
      2.0 * w * ((2.0 * w * w - 2.0 * w - 1.0) * std::log((1.0 - w) / w) + 3.0 * (1.0 - 2.0 * w));
  return num / (d * d * d * d * d);
}

double mutual_info_closed_form() {
  const double pi = std::numbers::pi;
  return 1.0 - (pi * pi - 4.0) / (16.0 * std::numbers::ln2);
}

DiscreteJoint binned_joint(const std::vector<double>& boundaries) {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const double lo = i == 0 ? 0.0 : boundaries[i - 1];
    if (!(boundaries[i] > lo) || !(boundaries[i] < 1.0))
      throw invalid_binning_error("boundaries must be strictly increasing inside (0,1)");
  }
  DiscreteJoint J;
  J.P.reserve(boundaries.size() + 1);
  double prev1 = 0.0, prev2 = 0.0;
  for (std::size_t i = 0; i <= boundaries.size(); ++i) {
    const double b = i < boundaries.size() ? boundaries[i] : 1.0;
    const double c1 = joint_cdf(b, 1);
    const double c2 = joint_cdf(b, 2);
    J.P.push_back({c1 - prev1, c2 - prev2});
    prev1 = c1;
    prev2 = c2;
  }
  return J;
}

}  // namespace toy

// ---------------------------------------------------------------------------

double FitParams::poly_exp() const { return a[static_cast<std::size_t>(degree) + 1]; }
double FitParams::one_minus_exp() const { return a[static_cast<std::size_t>(degree) + 2]; }

double fit_density_eval(const FitParams& par, double w) {
  if (par.degree < 0 || par.a.size() != static_cast<std::size_t>(par.degree) + 3)
    throw invalid_parameter_error("FitParams needs degree+3 coefficients");
  if (w < 0.0 || w > 1.0) throw invalid_parameter_error("density argument outside [0,1]");
  const double e1 = par.poly_exp();
  const double e2 = par.one_minus_exp();
  if (w == 0.0) {
    if (e1 < 0.0)
      throw invalid_parameter_error("density diverges at w=0; evaluate strictly inside (0,1)");
    return e1 > 0.0 ? 0.0 : std::exp(par.a[0]);
  }
  if (w == 1.0) {
    if (e2 < 0.0)
      throw invalid_parameter_error("density diverges at w=1; evaluate strictly inside (0,1)");
    double p = 0.0;
    for (int k = par.degree; k >= 0; --k) p = p + par.a[static_cast<std::size_t>(k)];
    return e2 > 0.0 ? 0.0 : std::exp(p);
  }
  double p = 0.0;
  for (int k = par.degree; k >= 0; --k) p = p * w + par.a[static_cast<std::size_t>(k)];
  return std::exp(p + e1 * std::log(w) + e2 * std::log1p(-w));
}

FitParams normalize_fit(const FitParams& par) {
  if (par.poly_exp() <= -1.0 || par.one_minus_exp() <= -1.0)
    throw non_normalizable_error("endpoint exponent <= -1: integral diverges");
  const double z =
      integrate([&](double w) { return fit_density_eval(par, w); }, 0.0, 1.0, 1e-10);
  if (!(z > 0.0) || !std::isfinite(z))
    throw non_normalizable_error("density integral is not positive and finite");
  FitParams out = par;
  out.a[0] -= std::log(z);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double cifar_g(const double* a, double x) {
  // a = (a1..a5); a6 derived so that G(1/2) = 1.
  const double a2 = a[1], a3 = a[2], a4 = a[3], a5 = a[4];
  if (!(a2 > 0.0)) throw invalid_parameter_error("cifar CDF needs a2 > 0");
  const double base = 1.0 - std::pow(2.0 * a2, -a3 * a4);
  if (!(base > 0.0)) throw invalid_parameter_error("cifar CDF: derived a6 undefined (base <= 0)");
  const double a6 = 2.0 * (std::pow(base, 1.0 / a4) - a5);
  const double lin = a5 + a6 * x;
  if (!(lin > 0.0))
    throw invalid_parameter_error("cifar CDF: non-positive base under fractional power");
  const double v = std::pow(x / a2, a3 * a4) + std::pow(lin, a4);
  const double g = std::pow(v, 1.0 / a4);
  if (!std::isfinite(g)) throw invalid_parameter_error("cifar CDF evaluation overflowed");
  return g;
}

double cifar_fstar(const double* a, double x) {
  if (x <= 0.0) return 0.0;  // limit: (x/a2)^(a3 a4) -> inf, 1/a4 < 0 -> 0
  return cifar_g(a, std::pow(2.0 * x, a[0]) / 2.0);
}

double cifar_base_cdf(const CifarFitParams& p, double w) {
  const double weight = p.branch_a[0];
  if (w < 0.5) return weight * cifar_fstar(p.branch_a.data() + 1, w);
  return 1.0 - (1.0 - weight) * cifar_fstar(p.branch_b.data(), 1.0 - w);
}

}  // namespace

double cifar_cdf_eval(const CifarFitParams& p, double w) {
  if (w < 0.0 || w > 1.0) throw invalid_parameter_error("cifar CDF argument outside [0,1]");
  double v = p.flip ? 1.0 - cifar_base_cdf(p, 1.0 - w) : cifar_base_cdf(p, w);
  return std::clamp(v, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

double ClassConditionalModel::joint_cdf(int y, double w) const {
  const double pr = y == 1 ? prior1() : 1.0 - prior1();
  return pr * class_cdf(y, w);
}

double ClassConditionalModel::marginal_cdf(double w) const {
  return joint_cdf(1, w) + joint_cdf(2, w);
}

double ClassConditionalModel::marginal_density(double w) const {
  return prior1() * class_density(1, w) + (1.0 - prior1()) * class_density(2, w);
}

double ClassConditionalModel::cond_prob(double w) const {
  const double num = prior1() * class_density(1, w);
  const double den = num + (1.0 - prior1()) * class_density(2, w);
  if (!(den > 0.0))
    throw undefined_conditional_error("conditional probability undefined where f(w) = 0");
  return std::clamp(num / den, 0.0, 1.0);
}

double conditional_prob(const ClassConditionalModel& m, double w) { return m.cond_prob(w); }

// ---------------------------------------------------------------------------

double AnalyticToyModel::class_cdf(int y, double w) const {
  return 2.0 * toy::joint_cdf(w, y);  // prior 1/2
}

double AnalyticToyModel::class_density(int y, double w) const {
  if (y != 1 && y != 2) throw invalid_parameter_error("class label must be 1 or 2");
  return 2.0 * toy::class1_density(y == 1 ? w : 1.0 - w);
}

// ---------------------------------------------------------------------------

ExpBetaModel::ExpBetaModel(FitParams f1, FitParams f2, double prior)
    : f1_(normalize_fit(f1)), f2_(normalize_fit(f2)), prior_(prior) {
  if (prior < 0.0 || prior > 1.0) throw invalid_parameter_error("prior outside [0,1]");
  cdf1_ = CachedCdf([this](double w) { return fit_density_eval(f1_, w); }, 0.0, 1.0);
  cdf2_ = CachedCdf([this](double w) { return fit_density_eval(f2_, w); }, 0.0, 1.0);
}

double ExpBetaModel::class_cdf(int y, double w) const {
  if (y != 1 && y != 2) throw invalid_parameter_error("class label must be 1 or 2");
  const CachedCdf& c = y == 1 ? cdf1_ : cdf2_;
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  return c.eval(w) / c.total();
}

double ExpBetaModel::class_density(int y, double w) const {
  if (y != 1 && y != 2) throw invalid_parameter_error("class label must be 1 or 2");
  return fit_density_eval(y == 1 ? f1_ : f2_, w);
}

// ---------------------------------------------------------------------------

CifarCdfModel::CifarCdfModel(CifarFitParams c1, CifarFitParams c2, double prior)
    : c1_(c1), c2_(c2), prior_(prior) {
  if (prior < 0.0 || prior > 1.0) throw invalid_parameter_error("prior outside [0,1]");
  // Fail fast on parameter combinations that make G undefined anywhere.
  for (int y = 1; y <= 2; ++y)
    for (int k = 0; k <= 16; ++k) (void)class_cdf(y, k / 16.0);
}

double CifarCdfModel::class_cdf(int y, double w) const {
  if (y != 1 && y != 2) throw invalid_parameter_error("class label must be 1 or 2");
  return cifar_cdf_eval(y == 1 ? c1_ : c2_, w);
}

double CifarCdfModel::class_density(int y, double w) const {
  const double h = 1e-7;
  const double lo = std::max(0.0, w - h);
  const double hi = std::min(1.0, w + h);
  if (hi <= lo) return 0.0;
  return (class_cdf(y, hi) - class_cdf(y, lo)) / (hi - lo);
}

// ---------------------------------------------------------------------------

UniformizedModel::UniformizedModel(std::shared_ptr<const ClassConditionalModel> base)
    : base_(std::move(base)) {
  if (!base_) throw invalid_parameter_error("uniformize: null model");
}

double UniformizedModel::inverse_cdf(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return invert_increasing([this](double w) { return base_->marginal_cdf(w); }, u, 0.0, 1.0);
}

double UniformizedModel::class_cdf(int y, double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return base_->class_cdf(y, inverse_cdf(u));
}

double UniformizedModel::class_density(int y, double u) const {
  const double w = inverse_cdf(std::clamp(u, 0.0, 1.0));
  const double fm = base_->marginal_density(w);
  if (!(fm > 0.0))
    throw undefined_conditional_error("uniformized density undefined on a zero-mass stretch");
  return base_->class_density(y, w) / fm;
}

double UniformizedModel::cond_prob(double u) const {
  return base_->cond_prob(inverse_cdf(std::clamp(u, 0.0, 1.0)));
}

}  // namespace paretobin
