#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vigf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ErrorCode {
  Parameter,
  InvalidDesign,
  IllConditioned,
  DuplicatePoint,
  DegenerateTrend,
  Domain,
  Objective,
  Usage,
  Io,
};

std::string_view error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes failure classes
/// so callers (and the CLI's error object) can react without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Normalized distance below which two points are treated as the same location.
inline constexpr double kDuplicateThreshold = 1e-9;

struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  static BoxDomain unit(int dim);

  int dim() const { return static_cast<int>(lower.size()); }
  double width(int j) const { return upper[j] - lower[j]; }
  bool contains(const VectorRef& x, double slack = 0.0) const;
  Vector to_unit(const VectorRef& x) const;
  Vector from_unit(const VectorRef& u) const;
  /// Throws Error(Parameter) unless d >= 1 and lower < upper componentwise.
  void validate() const;

  friend bool operator==(const BoxDomain&, const BoxDomain&) = default;
};

/// Training archive: one row of `points` per run, paired with `outputs`.
struct Design {
  BoxDomain domain;
  Matrix points;
  Vector outputs;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// Shape, domain membership and distinctness checks. Throws Error(InvalidDesign).
  void validate(int min_rows = 1) const;
  /// Smallest Euclidean distance between `x` and any row, in unit-cube coordinates.
  double min_unit_distance(const VectorRef& x) const;
  Design with_point(const VectorRef& x, double y) const;
};

/// Deterministic stream splitting for nested seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace vigf
