#pragma once

#include "vigf/gp.hpp"

namespace vigf {

enum class FidelityLevel : int { Low = 1, High = 2 };

/// Hierarchical kriging: the low-fidelity posterior mean, scaled by beta_hat,
/// is the trend of a GP on the high-fidelity data.
class HkModel {
 public:
  const GpModel& low_model() const { return low_; }
  const Design& high_design() const { return high_; }
  const KernelParams& params() const { return params_; }
  double beta_hat() const { return beta_hat_; }
  /// F_i = low-model predictive mean at high-fidelity row i.
  const Vector& trend_vector() const { return trend_; }
  double nugget_ratio() const { return eta_; }
  double log_likelihood() const { return log_likelihood_; }
  int dim() const { return high_.dim(); }

  double mean(const VectorRef& x) const;
  double var(const VectorRef& x) const;
  /// Level-aware variance: beta_hat^2 times the low-model variance for Low,
  /// the HK predictive variance for High.
  double var_level(const VectorRef& x, FidelityLevel level) const;

 private:
  friend HkModel condition_hk(const GpModel&, const Design&, const KernelParams&);
  friend HkModel fit_hk(const GpModel&, const Design&, const FitConfig&);

  void init_common(const GpModel& low, const Design& high);
  void finish_solves();

  GpModel low_;
  Design high_;
  KernelParams params_;
  double beta_hat_ = 0.0;
  Vector trend_;
  double eta_ = 0.0;
  double log_likelihood_ = 0.0;
  Matrix chol_;
  Vector alpha_;     // R^-1 (y - beta_hat F)
  Vector rinv_trend_;  // R^-1 F
  double trend_quad_ = 0.0;  // F' R^-1 F
};

/// HK posterior with fixed high-level hyperparameters; beta_hat is profiled.
HkModel condition_hk(const GpModel& low_model, const Design& high_design, const KernelParams& params);

/// HK fit: high-level lengthscales by concentrated likelihood with trend basis
/// F, beta_hat and sigma^2 in closed form.
HkModel fit_hk(const GpModel& low_model, const Design& high_design, const FitConfig& config = {});

/// Adds a low-fidelity run: refits the low model, then recomputes F, beta_hat
/// and the high-level hyperparameters.
HkModel add_low_observation(const HkModel& model, const VectorRef& x, double y, const FitConfig& config = {});

/// Adds a high-fidelity run and refits the high level (low model unchanged).
HkModel add_high_observation(const HkModel& model, const VectorRef& x, double y, const FitConfig& config = {});

}  // namespace vigf
