#pragma once

#include "vigf/gp.hpp"
#include "vigf/hk.hpp"
#include "vigf/optimizer.hpp"

#include <iosfwd>
#include <span>
#include <string_view>

namespace vigf {

enum class CriterionKind { Vigf, Eigf, Mse, VigfHk, EigfHk, MseHk };

std::string_view criterion_name(CriterionKind kind);
/// Accepts the lower-case names used on the command line ("vigf", "eigf_hk", ...).
CriterionKind parse_criterion(std::string_view name);
bool is_hk(CriterionKind kind);

struct NearestOutput {
  int index = -1;
  double value = 0.0;
};

/// Closest design row in unit-cube coordinates; ties go to the lowest index.
NearestOutput nearest_design_output(const VectorRef& x, const Design& design);

/// Moments of the improvement (Z(x) - f(x*))^2 with Z ~ N(m, s^2).
struct ImprovementStats {
  double bias = 0.0;      // m(x) - f(x*)
  double variance = 0.0;  // s^2(x)
  double lambda = 0.0;    // bias^2 / variance, 0 when the variance vanishes
  int nearest_index = -1;
};

ImprovementStats improvement_stats(const GpModel& model, const VectorRef& x);

/// Variance of the improvement: 4 s^2 bias^2 + 2 s^4.
inline double vigf_value(double bias, double variance) {
  return 4.0 * variance * bias * bias + 2.0 * variance * variance;
}
/// Expected improvement for global fit: bias^2 + s^2.
inline double eigf_value(double bias, double variance) { return bias * bias + variance; }

double vigf(const GpModel& model, const VectorRef& x);
double eigf(const GpModel& model, const VectorRef& x);
double mse_criterion(const GpModel& model, const VectorRef& x);

/// 1 - posterior correlation between x and the updating point x_u. Where either
/// posterior variance vanishes the correlation is taken as 1.
double repulsion(const GpModel& model, const VectorRef& x, const VectorRef& x_u);

/// VIGF(x) times the repulsion from every already-chosen point.
double pvigf(const GpModel& model, const VectorRef& x, std::span<const Vector> chosen);

/// Single-fidelity criteria; HK kinds raise Error(Usage).
double criterion(const GpModel& model, const VectorRef& x, CriterionKind kind);

/// Two-fidelity criteria: bias from the HK mean against the nearest
/// high-fidelity output, variance from var_level(x, level).
double criterion_hk(const HkModel& model, const VectorRef& x, FidelityLevel level, CriterionKind kind);

struct Selection {
  Vector x;
  double value = 0.0;
};

Selection select_next(const GpModel& model, CriterionKind kind, const DeConfig& de);

/// q >= 2 points: the first maximizes VIGF, each next one the running PVIGF.
/// Each pick that lands on a design row or earlier pick is retried once with a
/// fresh seed, then Error(DuplicatePoint).
std::vector<Selection> select_batch(const GpModel& model, int q, const DeConfig& de);

struct HkSelection {
  Vector x;
  FidelityLevel level = FidelityLevel::Low;
  double value = 0.0;
  double value_low = 0.0;
  double value_high = 0.0;
};

/// Maximizes the criterion over x separately for each level and returns the
/// better (x, level); equal values pick Low.
HkSelection select_next_hk(const HkModel& model, CriterionKind kind, const DeConfig& de);

/// Writes `objective` on a regular grid (points_per_dim per axis, endpoints
/// included) as CSV with header x_1..x_d,value.
void write_surface_csv(std::ostream& out, const Objective& objective, const BoxDomain& domain, int points_per_dim);

}  // namespace vigf
