#include "vigf/gp.hpp"

#include "kriging_detail.hpp"

#include <cmath>

namespace vigf {

void KernelParams::validate() const {
  if (lengthscales.size() == 0) throw Error(ErrorCode::Parameter, "kernel needs at least one lengthscale");
  for (Eigen::Index j = 0; j < lengthscales.size(); ++j) {
    if (!(lengthscales[j] > 0.0) || !std::isfinite(lengthscales[j])) {
      throw Error(ErrorCode::Parameter, "lengthscales must be positive and finite");
    }
  }
  if (!(process_variance > 0.0) || !std::isfinite(process_variance)) {
    throw Error(ErrorCode::Parameter, "process variance must be positive");
  }
  if (!(nugget >= 0.0)) throw Error(ErrorCode::Parameter, "nugget must be non-negative");
}

double matern32_corr(const VectorRef& x, const VectorRef& x2, const VectorRef& lengthscales) {
  if (x.size() != x2.size() || x.size() != lengthscales.size()) {
    throw Error(ErrorCode::Parameter, "matern32_corr: dimension mismatch");
  }
  double sum = 0.0;
  double prod = 1.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(lengthscales[j] > 0.0)) throw Error(ErrorCode::Parameter, "lengthscales must be positive");
    const double a = detail::kSqrt3 * std::abs(x[j] - x2[j]) / lengthscales[j];
    sum += a;
    prod *= 1.0 + a;
  }
  return prod * std::exp(-sum);
}

void GpModel::finish_solves() {
  const auto lower = chol_.triangularView<Eigen::Lower>();
  const Vector ones = Vector::Ones(design_.size());
  rinv_one_ = lower.adjoint().solve(lower.solve(ones));
  one_rinv_one_ = ones.dot(rinv_one_);
  mu_hat_ = rinv_one_.dot(design_.outputs) / one_rinv_one_;
  alpha_ = lower.adjoint().solve(lower.solve(design_.outputs - mu_hat_ * ones));
}

Vector GpModel::corr_vector(const VectorRef& x) const {
  return detail::corr_vector(design_.points, design_.domain, x, params_.lengthscales, eta_);
}

double GpModel::corr(const VectorRef& x, const VectorRef& x2) const {
  double c = matern32_corr(x, x2, params_.lengthscales);
  if (detail::coincident(design_.domain, x, x2)) c += eta_;
  return c;
}

double GpModel::mean(const VectorRef& x) const { return mu_hat_ + corr_vector(x).dot(alpha_); }

double GpModel::cov(const VectorRef& x, const VectorRef& x2) const {
  const auto lower = chol_.triangularView<Eigen::Lower>();
  const Vector r1 = corr_vector(x);
  const Vector r2 = corr_vector(x2);
  const Vector l1 = lower.solve(r1);
  const Vector l2 = lower.solve(r2);
  const double t1 = 1.0 - r1.dot(rinv_one_);
  const double t2 = 1.0 - r2.dot(rinv_one_);
  return params_.process_variance * (corr(x, x2) - l1.dot(l2) + t1 * t2 / one_rinv_one_);
}

double GpModel::var(const VectorRef& x) const {
  const Vector r = corr_vector(x);
  const Vector l = chol_.triangularView<Eigen::Lower>().solve(r);
  const double t = 1.0 - r.dot(rinv_one_);
  double v = params_.process_variance * (1.0 + eta_ - l.squaredNorm() + t * t / one_rinv_one_);
  if (v < 0.0) {
    if (v < -1e-8 * params_.process_variance) {
      throw Error(ErrorCode::IllConditioned, "negative predictive variance " + std::to_string(v));
    }
    v = 0.0;
  }
  return v;
}

GpModel condition(const Design& design, const KernelParams& params) {
  design.validate(1);
  params.validate();
  if (params.lengthscales.size() != design.dim()) {
    throw Error(ErrorCode::Parameter, "lengthscale count does not match design dimension");
  }
  GpModel m;
  m.design_ = design;
  m.params_ = params;
  const Matrix r = detail::corr_matrix(design.points, params.lengthscales);
  const double eta0 = params.nugget / params.process_variance;
  auto f = detail::factor(r, eta0, std::max(eta0, 1e-4));
  if (!f) throw Error(ErrorCode::IllConditioned, "covariance matrix not positive definite after nugget escalation");
  m.chol_ = std::move(f->chol);
  m.eta_ = f->eta;
  m.params_.nugget = m.eta_ * params.process_variance;
  m.finish_solves();
  const auto p = detail::profile(m.chol_, design.outputs, Vector::Ones(design.size()));
  m.log_likelihood_ = p ? p->log_likelihood : detail::kInfeasibleLogLik;
  return m;
}

GpModel fit(const Design& design, const FitConfig& config) {
  design.validate(2);
  auto mle = detail::fit_lengthscales(design, Vector::Ones(design.size()), config);
  GpModel m;
  m.design_ = design;
  m.params_ = KernelParams{mle.lengthscales, mle.profile.sigma2, mle.factor.eta * mle.profile.sigma2};
  m.eta_ = mle.factor.eta;
  m.chol_ = std::move(mle.factor.chol);
  m.log_likelihood_ = mle.profile.log_likelihood;
  m.finish_solves();
  return m;
}

GpModel update(const GpModel& model, const VectorRef& x_new, double y_new, bool refit, const FitConfig& config) {
  const Design& old = model.design();
  if (x_new.size() != old.dim()) throw Error(ErrorCode::Parameter, "update: point has wrong dimension");
  if (!old.domain.contains(x_new, 1e-12)) throw Error(ErrorCode::Domain, "update: point outside the domain");
  if (old.min_unit_distance(x_new) <= kDuplicateThreshold) {
    throw Error(ErrorCode::DuplicatePoint, "update: new point duplicates an existing design row");
  }
  Design next = old.with_point(x_new, y_new);
  if (refit) {
    FitConfig warm = config;
    warm.warm_start = model.params().lengthscales;
    return fit(next, warm);
  }

  // Rank-one extension of the Cholesky factor with the hyperparameters fixed.
  const int n = old.size();
  const Vector r = detail::corr_vector(old.points, old.domain, x_new, model.params().lengthscales, model.nugget_ratio());
  const Vector l = model.chol_corr().triangularView<Eigen::Lower>().solve(r);
  const double c2 = 1.0 + model.nugget_ratio() - l.squaredNorm();
  if (!(c2 > 1e-3 * model.nugget_ratio()) || !(c2 > 0.0)) {
    return condition(next, model.params());
  }
  GpModel m;
  m.design_ = std::move(next);
  m.params_ = model.params();
  m.eta_ = model.nugget_ratio();
  m.chol_ = Matrix::Zero(n + 1, n + 1);
  m.chol_.topLeftCorner(n, n) = model.chol_corr();
  m.chol_.block(n, 0, 1, n) = l.transpose();
  m.chol_(n, n) = std::sqrt(c2);
  m.finish_solves();
  const auto p = detail::profile(m.chol_, m.design_.outputs, Vector::Ones(n + 1));
  m.log_likelihood_ = p ? p->log_likelihood : detail::kInfeasibleLogLik;
  return m;
}

std::optional<double> concentrated_log_likelihood(const Design& design, const VectorRef& lengthscales,
                                                  double nugget_ratio) {
  const Matrix r = detail::corr_matrix(design.points, lengthscales);
  auto f = detail::factor(r, nugget_ratio, nugget_ratio);
  if (!f) return std::nullopt;
  auto p = detail::profile(f->chol, design.outputs, Vector::Ones(design.size()));
  if (!p) return std::nullopt;
  return p->log_likelihood;
}

}  // namespace vigf
