#include "vigf/hk.hpp"

#include "kriging_detail.hpp"

namespace vigf {

void HkModel::init_common(const GpModel& low, const Design& high) {
  high.validate(2);
  if (!(low.design().domain == high.domain)) {
    throw Error(ErrorCode::InvalidDesign, "low- and high-fidelity designs must share the same domain");
  }
  low_ = low;
  high_ = high;
  trend_.resize(high.size());
  for (int i = 0; i < high.size(); ++i) trend_[i] = low.mean(high.points.row(i).transpose());
  if (trend_.squaredNorm() == 0.0) throw Error(ErrorCode::DegenerateTrend, "trend vector F is identically zero");
}

void HkModel::finish_solves() {
  const auto p = detail::profile(chol_, high_.outputs, trend_);
  if (!p) throw Error(ErrorCode::DegenerateTrend, "F' K^-1 F <= 0");
  beta_hat_ = p->coef;
  alpha_ = p->alpha;
  rinv_trend_ = p->rinv_basis;
  trend_quad_ = p->basis_quad;
  log_likelihood_ = p->log_likelihood;
}

double HkModel::mean(const VectorRef& x) const {
  const Vector r = detail::corr_vector(high_.points, high_.domain, x, params_.lengthscales, eta_);
  return beta_hat_ * low_.mean(x) + r.dot(alpha_);
}

double HkModel::var(const VectorRef& x) const {
  const Vector r = detail::corr_vector(high_.points, high_.domain, x, params_.lengthscales, eta_);
  const Vector l = chol_.triangularView<Eigen::Lower>().solve(r);
  const double t = low_.mean(x) - r.dot(rinv_trend_);
  double v = params_.process_variance * (1.0 + eta_ - l.squaredNorm() + t * t / trend_quad_);
  if (v < 0.0) {
    if (v < -1e-8 * params_.process_variance) {
      throw Error(ErrorCode::IllConditioned, "negative HK predictive variance " + std::to_string(v));
    }
    v = 0.0;
  }
  return v;
}

double HkModel::var_level(const VectorRef& x, FidelityLevel level) const {
  if (level == FidelityLevel::Low) return beta_hat_ * beta_hat_ * low_.var(x);
  return var(x);
}

HkModel condition_hk(const GpModel& low_model, const Design& high_design, const KernelParams& params) {
  params.validate();
  if (params.lengthscales.size() != high_design.dim()) {
    throw Error(ErrorCode::Parameter, "lengthscale count does not match design dimension");
  }
  HkModel m;
  m.init_common(low_model, high_design);
  const double eta0 = params.nugget / params.process_variance;
  auto f = detail::factor(detail::corr_matrix(high_design.points, params.lengthscales), eta0, std::max(eta0, 1e-4));
  if (!f) throw Error(ErrorCode::IllConditioned, "covariance matrix not positive definite after nugget escalation");
  m.params_ = params;
  m.eta_ = f->eta;
  m.params_.nugget = m.eta_ * params.process_variance;
  m.chol_ = std::move(f->chol);
  m.finish_solves();
  return m;
}

HkModel fit_hk(const GpModel& low_model, const Design& high_design, const FitConfig& config) {
  HkModel m;
  m.init_common(low_model, high_design);
  auto mle = detail::fit_lengthscales(high_design, m.trend_, config);
  m.params_ = KernelParams{mle.lengthscales, mle.profile.sigma2, mle.factor.eta * mle.profile.sigma2};
  m.eta_ = mle.factor.eta;
  m.chol_ = std::move(mle.factor.chol);
  m.finish_solves();
  return m;
}

HkModel add_low_observation(const HkModel& model, const VectorRef& x, double y, const FitConfig& config) {
  const GpModel low = update(model.low_model(), x, y, /*refit=*/true, config);
  FitConfig warm = config;
  warm.warm_start = model.params().lengthscales;
  return fit_hk(low, model.high_design(), warm);
}

HkModel add_high_observation(const HkModel& model, const VectorRef& x, double y, const FitConfig& config) {
  const Design& high = model.high_design();
  if (x.size() != high.dim()) throw Error(ErrorCode::Parameter, "point has wrong dimension");
  if (high.min_unit_distance(x) <= kDuplicateThreshold) {
    throw Error(ErrorCode::DuplicatePoint, "new point duplicates a high-fidelity design row");
  }
  FitConfig warm = config;
  warm.warm_start = model.params().lengthscales;
  return fit_hk(model.low_model(), high.with_point(x, y), warm);
}

}  // namespace vigf
