#pragma once

// Shared numerics for the constant-trend and hierarchical kriging models.

#include "vigf/gp.hpp"

#include <optional>

namespace vigf::detail {

inline constexpr double kSqrt3 = 1.7320508075688772;
inline constexpr double kInfeasibleLogLik = -1e300;

/// Correlation matrix of the rows of `points` (unit diagonal, no nugget).
Matrix corr_matrix(const Matrix& points, const VectorRef& lengthscales);

/// r(x) against the rows of `points`; rows within the duplicate threshold get
/// the nugget ratio added.
Vector corr_vector(const Matrix& points, const BoxDomain& domain, const VectorRef& x,
                   const VectorRef& lengthscales, double eta);

bool coincident(const BoxDomain& domain, const VectorRef& a, const VectorRef& b);

struct Factor {
  Matrix chol;
  double eta = 0.0;
};

/// Cholesky of R + eta I, escalating eta by x10 up to eta_max on failure.
std::optional<Factor> factor(const Matrix& corr, double eta0, double eta_max);

/// Closed-form generalized-least-squares profile for trend basis b:
/// coef = b'R^-1 y / b'R^-1 b, sigma2 = (y - coef b)' R^-1 (y - coef b) / n.
struct Profile {
  double coef = 0.0;
  double sigma2 = 0.0;
  double log_likelihood = 0.0;
  Vector alpha;       // R^-1 (y - coef b)
  Vector rinv_basis;  // R^-1 b
  double basis_quad = 0.0;  // b' R^-1 b
};

std::optional<Profile> profile(const Matrix& chol, const Vector& y, const Vector& basis);

double sigma2_floor(const Vector& y);

struct MleResult {
  Vector lengthscales;
  Factor factor;
  Profile profile;
};

/// Maximizes the concentrated likelihood over log-lengthscales by DE with restarts.
/// Throws Error(IllConditioned) if no lengthscale admits a factorization and
/// Error(DegenerateTrend) if the trend basis is degenerate everywhere.
MleResult fit_lengthscales(const Design& design, const Vector& basis, const FitConfig& config);

}  // namespace vigf::detail
