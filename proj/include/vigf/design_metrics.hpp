#pragma once

#include "vigf/common.hpp"

#include <functional>
#include <iosfwd>
#include <optional>

namespace vigf {

struct TestSet {
  Matrix points;  // n_t x d, inside the unit cube
  Vector outputs;
};

using Predictor = std::function<double(const Vector&)>;

/// `n` points drawn uniformly on [0,1]^d with `seed`, evaluated by `fn`.
TestSet uniform_test_set(const Predictor& fn, int dim, int n, std::uint64_t seed);

/// Plain random Latin hypercube on [0,1]^d.
Matrix lhs_random(int n, int d, std::uint64_t seed);

/// Maximin Latin hypercube: a random LHS improved by `sweeps` proposed
/// within-column swaps. Returns a design whose minimum pairwise distance is at
/// least that of the starting LHS.
Matrix lhs_maximin(int n, int d, std::uint64_t seed, int sweeps = 10000);

double min_pairwise_distance(const Matrix& points);

/// RMSE over the test set divided by the range of the test outputs.
double nrmse(const Predictor& predict, const TestSet& test);

/// L2 star discrepancy (boxes anchored at the origin), Warnock closed form.
double discrepancy_l2(const Matrix& points);

/// CSV with header x_1..x_d[,y]; outputs go in the last column.
void write_design_csv(std::ostream& out, const Matrix& points, const std::optional<Vector>& outputs = std::nullopt);

struct CsvDesign {
  Matrix points;
  std::optional<Vector> outputs;
};

/// Reads a design CSV. A header whose last column is "y" marks an output column;
/// without a header every column is a coordinate.
CsvDesign read_design_csv(std::istream& in);

}  // namespace vigf
