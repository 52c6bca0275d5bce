#include "vigf/common.hpp"

#include <cmath>
#include <limits>

namespace vigf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parameter: return "parameter_error";
    case ErrorCode::InvalidDesign: return "invalid_design";
    case ErrorCode::IllConditioned: return "ill_conditioned_design";
    case ErrorCode::DuplicatePoint: return "duplicate_point";
    case ErrorCode::DegenerateTrend: return "degenerate_trend";
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Objective: return "objective_error";
    case ErrorCode::Usage: return "usage_error";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown_error";
}

BoxDomain BoxDomain::unit(int dim) {
  return BoxDomain{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

void BoxDomain::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw Error(ErrorCode::Parameter, "box domain needs matching non-empty bounds");
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] < upper[j])) {
      throw Error(ErrorCode::Parameter, "box domain requires lower < upper in dimension " + std::to_string(j));
    }
  }
}

bool BoxDomain::contains(const VectorRef& x, double slack) const {
  if (x.size() != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    const double tol = slack * width(j);
    if (!(x[j] >= lower[j] - tol && x[j] <= upper[j] + tol)) return false;
  }
  return true;
}

Vector BoxDomain::to_unit(const VectorRef& x) const {
  Vector u(dim());
  for (int j = 0; j < dim(); ++j) u[j] = (x[j] - lower[j]) / width(j);
  return u;
}

Vector BoxDomain::from_unit(const VectorRef& u) const {
  Vector x(dim());
  for (int j = 0; j < dim(); ++j) x[j] = lower[j] + u[j] * width(j);
  return x;
}

void Design::validate(int min_rows) const {
  domain.validate();
  if (points.cols() != domain.dim()) {
    throw Error(ErrorCode::InvalidDesign, "design columns do not match domain dimension");
  }
  if (points.rows() != outputs.size()) {
    throw Error(ErrorCode::InvalidDesign, "design has " + std::to_string(points.rows()) + " points but " +
                                              std::to_string(outputs.size()) + " outputs");
  }
  if (size() < min_rows) {
    throw Error(ErrorCode::InvalidDesign, "design needs at least " + std::to_string(min_rows) + " rows");
  }
  for (int i = 0; i < size(); ++i) {
    if (!std::isfinite(outputs[i])) throw Error(ErrorCode::InvalidDesign, "non-finite output in row " + std::to_string(i));
    if (!domain.contains(points.row(i).transpose(), 1e-12)) {
      throw Error(ErrorCode::InvalidDesign, "row " + std::to_string(i) + " lies outside the domain");
    }
  }
  for (int i = 0; i < size(); ++i) {
    const Vector ui = domain.to_unit(points.row(i).transpose());
    for (int k = i + 1; k < size(); ++k) {
      if ((ui - domain.to_unit(points.row(k).transpose())).norm() <= kDuplicateThreshold) {
        throw Error(ErrorCode::InvalidDesign,
                    "rows " + std::to_string(i) + " and " + std::to_string(k) + " are duplicates");
      }
    }
  }
}

double Design::min_unit_distance(const VectorRef& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < dim(); ++j) {
      const double h = (x[j] - points(i, j)) / domain.width(j);
      s += h * h;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

Design Design::with_point(const VectorRef& x, double y) const {
  Design out{domain, Matrix(size() + 1, dim()), Vector(size() + 1)};
  out.points.topRows(size()) = points;
  out.points.row(size()) = x.transpose();
  out.outputs.head(size()) = outputs;
  out.outputs[size()] = y;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace vigf
