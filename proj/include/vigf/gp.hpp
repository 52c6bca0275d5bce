#pragma once

#include "vigf/common.hpp"
#include "vigf/optimizer.hpp"

#include <optional>

namespace vigf {

struct KernelParams {
  Vector lengthscales;
  double process_variance = 1.0;
  /// Absolute diagonal jitter (variance units).
  double nugget = 0.0;

  void validate() const;
};

/// Tensor-product Matérn 3/2 correlation, prod_j (1 + sqrt(3) h_j) exp(-sqrt(3) h_j), h_j = |x_j - x2_j| / l_j.
double matern32_corr(const VectorRef& x, const VectorRef& x2, const VectorRef& lengthscales);

/// Maximum-likelihood settings. Lengthscales are searched in log-space within
/// [lengthscale_lower, lengthscale_upper] times the domain width of each input.
struct FitConfig {
  DeConfig de{.population_size = 20, .generations = 50};
  int restarts = 2;
  double nugget = 1e-8;       // relative to the process variance
  double max_nugget = 1e-4;   // escalation ceiling (x10 steps)
  double lengthscale_lower = 1e-3;
  double lengthscale_upper = 10.0;
  std::optional<Vector> warm_start;  // lengthscales seeded into every restart
};

/// Constant-trend (ordinary) kriging posterior. Immutable once built.
class GpModel {
 public:
  const Design& design() const { return design_; }
  const KernelParams& params() const { return params_; }
  double mu_hat() const { return mu_hat_; }
  /// Concentrated log-likelihood at the stored lengthscales.
  double log_likelihood() const { return log_likelihood_; }
  /// Nugget divided by process variance.
  double nugget_ratio() const { return eta_; }
  int dim() const { return design_.dim(); }

  double mean(const VectorRef& x) const;
  double cov(const VectorRef& x, const VectorRef& x2) const;
  double var(const VectorRef& x) const;
  /// Correlation vector r(x) against the design rows (nugget included on coincident rows).
  Vector corr_vector(const VectorRef& x) const;
  /// Kernel correlation c(x, x2), nugget included when the points coincide.
  double corr(const VectorRef& x, const VectorRef& x2) const;

  const Matrix& chol_corr() const { return chol_; }
  /// (R + eta I)^{-1} (y - mu_hat 1): correlation-scale weights of the mean.
  const Vector& alpha() const { return alpha_; }
  /// (R + eta I)^{-1} 1.
  const Vector& rinv_one() const { return rinv_one_; }

 private:
  friend GpModel condition(const Design&, const KernelParams&);
  friend GpModel fit(const Design&, const FitConfig&);
  friend GpModel update(const GpModel&, const VectorRef&, double, bool, const FitConfig&);

  void finish_solves();

  Design design_;
  KernelParams params_;
  double eta_ = 0.0;
  double mu_hat_ = 0.0;
  double log_likelihood_ = 0.0;
  Matrix chol_;
  Vector alpha_;
  Vector rinv_one_;
  double one_rinv_one_ = 0.0;
};

/// Conditions on `design` with fixed hyperparameters; mu_hat is profiled.
GpModel condition(const Design& design, const KernelParams& params);

/// Maximum-likelihood fit: lengthscales by DE on the concentrated likelihood,
/// sigma^2 and mu_hat in closed form.
GpModel fit(const Design& design, const FitConfig& config = {});

/// Adds one observation. Without refit only the Cholesky factor is extended
/// (hyperparameters kept); with refit the hyperparameters are re-estimated
/// starting from the current lengthscales.
GpModel update(const GpModel& model, const VectorRef& x_new, double y_new, bool refit,
               const FitConfig& config = {});

/// Concentrated log-likelihood -1/2 [n log sigma2_hat + log det R + n] at the
/// given lengthscales and relative nugget; empty if R is not positive definite.
std::optional<double> concentrated_log_likelihood(const Design& design, const VectorRef& lengthscales,
                                                  double nugget_ratio);

}  // namespace vigf
