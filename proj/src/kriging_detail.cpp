#include "kriging_detail.hpp"

#include <cmath>

namespace vigf::detail {

Matrix corr_matrix(const Matrix& points, const VectorRef& lengthscales) {
  const auto n = points.rows();
  const auto d = points.cols();
  Vector inv_ls = kSqrt3 * lengthscales.cwiseInverse();
  Matrix pts_t = points.transpose();  // column access per point
  Matrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index k = i + 1; k < n; ++k) {
      double sum = 0.0;
      double prod = 1.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double a = std::abs(pts_t(j, i) - pts_t(j, k)) * inv_ls[j];
        sum += a;
        prod *= 1.0 + a;
      }
      const double c = prod * std::exp(-sum);
      r(i, k) = c;
      r(k, i) = c;
    }
  }
  return r;
}

bool coincident(const BoxDomain& domain, const VectorRef& a, const VectorRef& b) {
  double s = 0.0;
  for (int j = 0; j < domain.dim(); ++j) {
    const double h = (a[j] - b[j]) / domain.width(j);
    s += h * h;
  }
  return s <= kDuplicateThreshold * kDuplicateThreshold;
}

Vector corr_vector(const Matrix& points, const BoxDomain& domain, const VectorRef& x,
                   const VectorRef& lengthscales, double eta) {
  const auto n = points.rows();
  const auto d = points.cols();
  Vector r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    double prod = 1.0;
    double unit_sq = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = std::abs(x[j] - points(i, j));
      const double a = kSqrt3 * diff / lengthscales[j];
      sum += a;
      prod *= 1.0 + a;
      const double h = diff / domain.width(static_cast<int>(j));
      unit_sq += h * h;
    }
    r[i] = prod * std::exp(-sum);
    if (unit_sq <= kDuplicateThreshold * kDuplicateThreshold) r[i] += eta;
  }
  return r;
}

std::optional<Factor> factor(const Matrix& corr, double eta0, double eta_max) {
  double eta = eta0;
  Matrix work = corr;
  for (;;) {
    work.diagonal() = corr.diagonal().array() + eta;
    Eigen::LLT<Matrix> llt(work);
    if (llt.info() == Eigen::Success) {
      return Factor{llt.matrixL(), eta};
    }
    if (eta >= eta_max) return std::nullopt;
    eta = std::min(eta_max, eta > 0.0 ? eta * 10.0 : 1e-12);
  }
}

double sigma2_floor(const Vector& y) {
  const double scale = y.size() > 0 ? y.squaredNorm() / static_cast<double>(y.size()) : 0.0;
  return std::max(1e-12 * scale, 1e-300);
}

std::optional<Profile> profile(const Matrix& chol, const Vector& y, const Vector& basis) {
  const auto lower = chol.triangularView<Eigen::Lower>();
  const Vector lb = lower.solve(basis);
  const double quad = lb.squaredNorm();
  if (!(quad > 0.0) || !std::isfinite(quad)) return std::nullopt;
  const Vector ly = lower.solve(y);
  Profile p;
  p.basis_quad = quad;
  p.coef = lb.dot(ly) / quad;
  const Vector lres = ly - p.coef * lb;
  const double n = static_cast<double>(y.size());
  p.sigma2 = std::max(lres.squaredNorm() / n, sigma2_floor(y));
  p.alpha = lower.adjoint().solve(lres);
  p.rinv_basis = lower.adjoint().solve(lb);
  const double log_det = 2.0 * chol.diagonal().array().log().sum();
  p.log_likelihood = -0.5 * (n * std::log(p.sigma2) + log_det + n);
  return p;
}

MleResult fit_lengthscales(const Design& design, const Vector& basis, const FitConfig& config) {
  const int d = design.dim();
  BoxDomain log_box;
  for (int j = 0; j < d; ++j) {
    const double w = design.domain.width(j);
    log_box.lower.push_back(std::log(config.lengthscale_lower * w));
    log_box.upper.push_back(std::log(config.lengthscale_upper * w));
  }

  bool any_factor = false;
  auto objective = [&](const Vector& t) {
    const Vector ls = t.array().exp();
    auto f = factor(corr_matrix(design.points, ls), config.nugget, config.max_nugget);
    if (!f) return kInfeasibleLogLik;
    any_factor = true;
    auto p = profile(f->chol, design.outputs, basis);
    if (!p || !std::isfinite(p->log_likelihood)) return kInfeasibleLogLik;
    return p->log_likelihood;
  };

  std::vector<Vector> starts;
  if (config.warm_start) {
    if (config.warm_start->size() != d) throw Error(ErrorCode::Parameter, "warm start has wrong dimension");
    starts.push_back(config.warm_start->array().log().matrix());
  }

  Vector best_t;
  double best = kInfeasibleLogLik;
  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    DeConfig de = config.de;
    de.seed = mix_seed(config.de.seed, static_cast<std::uint64_t>(r));
    const DeResult res = de_maximize(objective, log_box, de, starts);
    if (best_t.size() == 0 || res.value > best) {
      best = res.value;
      best_t = res.x;
    }
  }
  if (!(best > kInfeasibleLogLik)) {
    if (!any_factor) throw Error(ErrorCode::IllConditioned, "covariance matrix not positive definite after nugget escalation");
    throw Error(ErrorCode::DegenerateTrend, "trend basis is degenerate (b' K^-1 b <= 0)");
  }

  MleResult out;
  out.lengthscales = best_t.array().exp();
  auto f = factor(corr_matrix(design.points, out.lengthscales), config.nugget, config.max_nugget);
  out.factor = std::move(*f);
  out.profile = *profile(out.factor.chol, design.outputs, basis);
  return out;
}

}  // namespace vigf::detail
