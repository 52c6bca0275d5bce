#include "doctest.h"
#include "oracles.hpp"

#include "vigf/design_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace vigf;

namespace {

bool is_latin(const Matrix& x) {
  const auto n = x.rows();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = x(i, j);
      if (v < 0.0 || v >= 1.0) return false;
      ++count[static_cast<std::size_t>(std::floor(v * static_cast<double>(n)))];
    }
    if (std::any_of(count.begin(), count.end(), [](int c) { return c != 1; })) return false;
  }
  return true;
}

Matrix uniform_points(int n, int d, std::mt19937_64& rng) {
  Matrix m(n, d);
  for (int i = 0; i < n; ++i) m.row(i) = oracle::uniform_point(d, rng).transpose();
  return m;
}

}  // namespace

TEST_CASE("Latin hypercube structure") {
  const Matrix two = lhs_maximin(2, 1, 3);
  CHECK(std::min(two(0, 0), two(1, 0)) < 0.5);
  CHECK(std::max(two(0, 0), two(1, 0)) >= 0.5);
  for (int n : {2, 5, 13, 40})
    for (int d : {1, 2, 5}) {
      CHECK(is_latin(lhs_random(n, d, 9)));
      CHECK(is_latin(lhs_maximin(n, d, 9, 2000)));
    }
  CHECK(lhs_maximin(12, 3, 4) == lhs_maximin(12, 3, 4));
  CHECK(lhs_maximin(12, 3, 4) != lhs_maximin(12, 3, 5));
  CHECK_THROWS_AS(lhs_maximin(1, 2, 0), Error);
}

TEST_CASE("maximin search never loses distance") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    CHECK(min_pairwise_distance(lhs_maximin(15, 3, s)) >= min_pairwise_distance(lhs_random(15, 3, s)));
    CHECK(lhs_maximin(15, 3, s, 0) == lhs_random(15, 3, s));
  }
}

TEST_CASE("maximin beats the median random LHS") {
  std::vector<double> random;
  for (std::uint64_t s = 0; s < 100; ++s) random.push_back(min_pairwise_distance(lhs_random(10, 2, 1000 + s)));
  std::nth_element(random.begin(), random.begin() + 50, random.end());
  const double med = random[50];
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(min_pairwise_distance(lhs_maximin(10, 2, s)) >= med);
}

TEST_CASE("NRMSE") {
  TestSet t{Matrix(2, 1), Vector(2)};
  t.points << 0.25, 0.75;
  t.outputs << 0.0, 1.0;
  CHECK(nrmse([&](const Vector& x) { return x[0] < 0.5 ? 0.0 : 1.0; }, t) == 0.0);
  CHECK(nrmse([](const Vector&) { return 0.0; }, t) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  std::mt19937_64 rng(4);
  const auto f = [](const Vector& x) { return std::sin(3.0 * x[0]) + x[1]; };
  const TestSet ts = uniform_test_set(f, 2, 500, 11);
  CHECK(ts.points.rows() == 500);
  CHECK(ts.points.minCoeff() >= 0.0);
  CHECK(ts.points.maxCoeff() <= 1.0);
  const auto g = [&](const Vector& x) { return f(x) + 0.1 * x[0]; };
  TestSet shifted = ts;
  shifted.outputs.array() += 5.0;
  CHECK(nrmse([&](const Vector& x) { return g(x) + 5.0; }, shifted) == doctest::Approx(nrmse(g, ts)).epsilon(1e-12));
  CHECK(nrmse(g, ts) > 0.0);
  CHECK(uniform_test_set(f, 2, 500, 11).points == ts.points);

  TestSet flat = t;
  flat.outputs.setConstant(2.0);
  CHECK_THROWS_AS(nrmse([](const Vector&) { return 0.0; }, flat), Error);
}

TEST_CASE("discrepancy closed form") {
  // n = 1, d = 1: D^2 = 1/3 - (1 - x^2) + (1 - x).
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    Matrix p(1, 1);
    p << x;
    CHECK(discrepancy_l2(p) == doctest::Approx(std::sqrt(1.0 / 3.0 - (1.0 - x * x) + (1.0 - x))).epsilon(1e-12));
  }
  Matrix p(1, 1);
  p << 0.3;
  const auto [mc, se] = oracle::discrepancy_sq_mc(p, 1000000, 5);
  CHECK(std::abs(std::sqrt(mc) - discrepancy_l2(p)) <= 1e-3);
  (void)se;

  std::mt19937_64 rng(6);
  const Matrix pts = uniform_points(9, 3, rng);
  Matrix perm = pts.colwise().reverse();
  CHECK(discrepancy_l2(perm) == doctest::Approx(discrepancy_l2(pts)).epsilon(1e-13));

  Matrix bad = pts;
  bad(0, 0) = -0.01;
  CHECK_THROWS_AS(discrepancy_l2(bad), Error);
}

TEST_CASE("discrepancy matches Monte-Carlo integration") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick_n(1, 32), pick_d(1, 4);
  for (int t = 0; t < 3; ++t) {
    const Matrix pts = uniform_points(pick_n(rng), pick_d(rng), rng);
    const double d2 = std::pow(discrepancy_l2(pts), 2);
    const auto [mc, se] = oracle::discrepancy_sq_mc(pts, 1000000, 100 + t);
    CHECK(std::abs(mc - d2) <= 3.0 * se);
  }
}

TEST_CASE("low-discrepancy set beats random sets") {
  // 16-point two-dimensional Hammersley set.
  Matrix h(16, 2);
  for (int i = 0; i < 16; ++i) {
    double rev = 0.0, f = 0.5;
    for (int k = i; k > 0; k >>= 1, f *= 0.5) rev += f * (k & 1);
    h(i, 0) = (i + 0.5) / 16.0;
    h(i, 1) = rev;
  }
  std::mt19937_64 rng(10);
  std::vector<double> random;
  for (int s = 0; s < 100; ++s) random.push_back(discrepancy_l2(uniform_points(16, 2, rng)));
  std::nth_element(random.begin(), random.begin() + 50, random.end());
  CHECK(discrepancy_l2(h) < random[50]);
}

TEST_CASE("design CSV round trip") {
  std::mt19937_64 rng(12);
  const Matrix pts = uniform_points(5, 3, rng);
  Vector y(5);
  y << 1.0, -2.5, 1e-17, 3.25, 1e10 / 3.0;
  std::stringstream a;
  write_design_csv(a, pts, y);
  const CsvDesign back = read_design_csv(a);
  CHECK(back.points == pts);
  REQUIRE(back.outputs.has_value());
  CHECK(*back.outputs == y);

  std::stringstream b;
  write_design_csv(b, pts);
  CHECK(b.str().rfind("x_1,x_2,x_3\n", 0) == 0);
  const CsvDesign nb = read_design_csv(b);
  CHECK(nb.points == pts);
  CHECK_FALSE(nb.outputs.has_value());

  std::stringstream raw("0.1,0.2\n0.3,0.4\n");
  const CsvDesign r = read_design_csv(raw);
  CHECK(r.points.rows() == 2);
  CHECK(r.points(1, 0) == 0.3);

  std::stringstream ragged("0.1,0.2\n0.3\n");
  CHECK_THROWS_AS(read_design_csv(ragged), Error);
  std::stringstream junk("x_1\nabc\n");
  CHECK_THROWS_AS(read_design_csv(junk), Error);
}
