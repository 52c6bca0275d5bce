#include "vigf/design_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace vigf {

TestSet uniform_test_set(const Predictor& fn, int dim, int n, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw Error(ErrorCode::Parameter, "test set needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  TestSet t{Matrix(n, dim), Vector(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) t.points(i, j) = unif(rng);
    t.outputs[i] = fn(t.points.row(i).transpose());
  }
  return t;
}

Matrix lhs_random(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw Error(ErrorCode::Parameter, "LHS needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix x(n, d);
  std::vector<int> perm(n);
  for (int j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) x(i, j) = (perm[i] + unif(rng)) / n;
  }
  return x;
}

double min_pairwise_distance(const Matrix& points) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = i + 1; k < points.rows(); ++k) {
      best = std::min(best, (points.row(i) - points.row(k)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

namespace {

// Morris-Mitchell phi_p surrogate of the maximin objective.
constexpr int kPhiPower = 50;

long double pair_term(double sq_dist) {
  return std::pow(static_cast<long double>(sq_dist), -kPhiPower / 2.0L);
}

}  // namespace

Matrix lhs_maximin(int n, int d, std::uint64_t seed, int sweeps) {
  if (n < 2) throw Error(ErrorCode::Parameter, "maximin LHS needs n >= 2");
  Matrix x = lhs_random(n, d, seed);
  if (sweeps <= 0) return x;

  Matrix sq(n, n);
  for (int i = 0; i < n; ++i) {
    sq(i, i) = 0.0;
    for (int k = i + 1; k < n; ++k) sq(i, k) = sq(k, i) = (x.row(i) - x.row(k)).squaredNorm();
  }
  auto min_sq = [&] {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) m = std::min(m, sq(i, k));
    return m;
  };

  Matrix best = x;
  double best_min = min_sq();
  std::mt19937_64 rng(mix_seed(seed, 1));
  std::uniform_int_distribution<int> pick_row(0, n - 1);
  std::uniform_int_distribution<int> pick_col(0, d - 1);
  std::vector<double> new_i(n), new_j(n);

  for (int s = 0; s < sweeps; ++s) {
    const int col = pick_col(rng);
    const int i = pick_row(rng);
    int j = pick_row(rng);
    if (i == j) continue;
    const double xi = x(i, col);
    const double xj = x(j, col);
    long double delta = 0.0L;
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const double xk = x(k, col);
      new_i[k] = sq(i, k) - (xi - xk) * (xi - xk) + (xj - xk) * (xj - xk);
      new_j[k] = sq(j, k) - (xj - xk) * (xj - xk) + (xi - xk) * (xi - xk);
      delta += pair_term(new_i[k]) + pair_term(new_j[k]) - pair_term(sq(i, k)) - pair_term(sq(j, k));
    }
    if (!(delta < 0.0L)) continue;
    x(i, col) = xj;
    x(j, col) = xi;
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      sq(i, k) = sq(k, i) = new_i[k];
      sq(j, k) = sq(k, j) = new_j[k];
    }
    const double m = min_sq();
    if (m > best_min) {
      best_min = m;
      best = x;
    }
  }
  return best;
}

double nrmse(const Predictor& predict, const TestSet& test) {
  const auto n = test.outputs.size();
  if (n < 1) throw Error(ErrorCode::Parameter, "nrmse: empty test set");
  const double range = test.outputs.maxCoeff() - test.outputs.minCoeff();
  if (!(range > 0.0)) throw Error(ErrorCode::Parameter, "nrmse: constant test outputs, normalization undefined");
  double ss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double e = predict(test.points.row(t).transpose()) - test.outputs[t];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(n)) / range;
}

double discrepancy_l2(const Matrix& points) {
  const auto n = points.rows();
  const auto d = points.cols();
  if (n < 1 || d < 1) throw Error(ErrorCode::Parameter, "discrepancy needs at least one point");
  if ((points.array() < 0.0).any() || (points.array() > 1.0).any() || !points.allFinite()) {
    throw Error(ErrorCode::Domain, "discrepancy: points must lie in the unit cube");
  }
  double single = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) p *= 1.0 - points(i, k) * points(i, k);
    single += p;
  }
  double pairs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) diag *= 1.0 - points(i, k);
    pairs += diag;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double p = 1.0;
      for (Eigen::Index k = 0; k < d; ++k) p *= 1.0 - std::max(points(i, k), points(j, k));
      pairs += 2.0 * p;
    }
  }
  const double nn = static_cast<double>(n);
  const double d2 = std::pow(3.0, -static_cast<double>(d)) - std::pow(2.0, 1.0 - static_cast<double>(d)) / nn * single +
                    pairs / (nn * nn);
  return std::sqrt(std::max(d2, 0.0));
}

void write_design_csv(std::ostream& out, const Matrix& points, const std::optional<Vector>& outputs) {
  for (Eigen::Index j = 0; j < points.cols(); ++j) out << (j ? "," : "") << "x_" << (j + 1);
  if (outputs) out << ",y";
  out << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) out << (j ? "," : "") << points(i, j);
    if (outputs) out << "," << (*outputs)[i];
    out << "\n";
  }
}

CsvDesign read_design_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      char* end = nullptr;
      std::strtod(cells[0].c_str(), &end);
      if (end == cells[0].c_str()) {
        header = cells;
        continue;
      }
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str()) throw Error(ErrorCode::Io, "design CSV: cannot parse '" + c + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw Error(ErrorCode::Io, "design CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Io, "design CSV: no data rows");
  const auto cols = static_cast<Eigen::Index>(rows.front().size());
  const bool has_y = !header.empty() && header.back() == "y";
  const Eigen::Index d = has_y ? cols - 1 : cols;
  if (d < 1) throw Error(ErrorCode::Io, "design CSV: no coordinate columns");
  CsvDesign out{Matrix(static_cast<Eigen::Index>(rows.size()), d), std::nullopt};
  if (has_y) out.outputs = Vector(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out.points(static_cast<Eigen::Index>(i), j) = rows[i][j];
    if (has_y) (*out.outputs)[static_cast<Eigen::Index>(i)] = rows[i][d];
  }
  return out;
}

}  // namespace vigf
