#include "doctest.h"
#include "oracles.hpp"

#include "vigf/benchfns.hpp"
#include "vigf/gp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace vigf;

namespace {

double wave(const Vector& x) { return std::sin(5.0 * x.sum()) + x.squaredNorm(); }

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

KernelParams random_params(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KernelParams p;
  p.lengthscales.resize(d);
  for (int j = 0; j < d; ++j) p.lengthscales[j] = std::exp(std::log(0.05) + u(rng) * std::log(20.0));
  p.process_variance = 0.1 + 3.0 * u(rng);
  p.nugget = 1e-8 * p.process_variance;
  return p;
}

}  // namespace

TEST_CASE("matern kernel values") {
  Vector a(1), b(1), l(1);
  a << 0.2;
  b << 1.2;
  l << 1.0;
  CHECK(matern32_corr(a, b, l) == doctest::Approx(0.48335772459650765).epsilon(1e-14));
  CHECK(matern32_corr(a, a, l) == 1.0);

  Vector x = Vector::Zero(2), y = Vector::Ones(2), l2 = Vector::Ones(2);
  CHECK(matern32_corr(x, y, l2) == doctest::Approx(0.23363468992711334).epsilon(1e-14));
  CHECK(matern32_corr(x, y, l2) == matern32_corr(y, x, l2));

  // Depends only on |x_j - x2_j|.
  Vector p(2), q(2), p2(2), q2(2), ls(2);
  p << 0.1, 0.9;
  q << 0.4, 0.3;
  p2 << 0.7, 0.0;
  q2 << 0.4, 0.6;
  ls << 0.3, 0.8;
  CHECK(matern32_corr(p, q, ls) == doctest::Approx(matern32_corr(p2, q2, ls)).epsilon(1e-14));

  l2[1] = 0.0;
  CHECK_THROWS_AS(matern32_corr(x, y, l2), Error);
  l2[1] = -1.0;
  try {
    matern32_corr(x, y, l2);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parameter);
  }
}

TEST_CASE("posterior matches dense oracle on small designs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick_n(2, 6), pick_d(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = pick_n(rng), d = pick_d(rng);
    const Design des = oracle::random_design(n, d, rng, wave);
    const GpModel m = condition(des, random_params(d, rng));
    const oracle::GpDense o(m);
    CHECK(rel_err(m.mu_hat(), static_cast<double>(o.mu)) < 1e-8);
    for (int k = 0; k < 5; ++k) {
      const Vector x = oracle::uniform_point(d, rng);
      const Vector x2 = oracle::uniform_point(d, rng);
      CHECK(rel_err(m.mean(x), o.mean(x)) < 1e-8);
      CHECK(std::abs(m.cov(x, x2) - o.cov(x, x2)) <= 1e-8 * std::max(std::abs(o.cov(x, x2)), m.params().process_variance * 1e-2));
      CHECK(std::abs(m.var(x) - o.cov(x, x)) <= 1e-8 * std::max(o.cov(x, x), m.params().process_variance * 1e-2));
    }
  }
}

TEST_CASE("two-point mu_hat by explicit inverse") {
  Design des{BoxDomain::unit(1), Matrix(2, 1), Vector(2)};
  des.points << 0.2, 0.7;
  des.outputs << 1.5, -0.5;
  KernelParams p{Vector::Constant(1, 0.4), 2.0, 0.0};
  const GpModel m = condition(des, p);
  Vector l(1);
  l << 0.4;
  const double r = matern32_corr(des.points.row(0).transpose(), des.points.row(1).transpose(), l);
  const double eta = m.nugget_ratio();
  // [[a, r], [r, a]]^{-1} = [[a, -r], [-r, a]] / (a^2 - r^2)
  const double a = 1.0 + eta;
  const double s = (a - r) / (a * a - r * r);
  const double mu = (s * 1.5 + s * -0.5) / (2.0 * s);
  CHECK(m.mu_hat() == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("constant outputs give a constant predictor") {
  std::mt19937_64 rng(3);
  Design des = oracle::random_design(8, 2, rng, wave);
  des.outputs.setConstant(4.25);
  const GpModel m = fit(des);
  CHECK(m.mu_hat() == doctest::Approx(4.25).epsilon(1e-10));
  for (int k = 0; k < 20; ++k) CHECK(m.mean(oracle::uniform_point(2, rng)) == doctest::Approx(4.25).epsilon(1e-9));
}

TEST_CASE("fitted models interpolate") {
  std::mt19937_64 rng(5);
  for (const char* key : {"f1", "f2", "f3", "f9", "f10"}) {
    const BenchmarkFn& fn = benchmark(key);
    for (int n : {6, 15, 30}) {
      Design des{BoxDomain::unit(fn.dim), Matrix(n, fn.dim), Vector(n)};
      for (int i = 0; i < n; ++i) {
        des.points.row(i) = oracle::uniform_point(fn.dim, rng).transpose();
        des.outputs[i] = fn(des.points.row(i).transpose());
      }
      FitConfig cfg;
      cfg.de.seed = static_cast<std::uint64_t>(n);
      const GpModel m = fit(des, cfg);
      const double range = des.outputs.maxCoeff() - des.outputs.minCoeff();
      const double s2 = m.params().process_variance;
      for (int i = 0; i < n; ++i) {
        const Vector xi = des.points.row(i).transpose();
        CHECK(std::abs(m.mean(xi) - des.outputs[i]) <= 1e-8 * range);
        CHECK(m.var(xi) <= 1e-6 * s2);
        CHECK(m.cov(xi, xi) <= 1e-6 * s2);
      }
    }
  }
}

TEST_CASE("fitted likelihood dominates random draws") {
  std::mt19937_64 rng(17);
  const Design des = oracle::random_design(12, 2, rng, wave);
  const GpModel m = fit(des);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(10.0));
  for (int k = 0; k < 100; ++k) {
    Vector ls(2);
    ls << std::exp(u(rng)), std::exp(u(rng));
    const auto ll = concentrated_log_likelihood(des, ls, m.nugget_ratio());
    if (ll) CHECK(m.log_likelihood() >= *ll - 1e-9);
  }
  CHECK(m.log_likelihood() == doctest::Approx(*concentrated_log_likelihood(des, m.params().lengthscales, m.nugget_ratio())));
}

TEST_CASE("far-field variance limit") {
  std::mt19937_64 rng(23);
  Design des = oracle::random_design(5, 1, rng, wave);
  des.domain = BoxDomain{{0.0}, {100.0}};
  KernelParams p{Vector::Constant(1, 0.05), 1.7, 1.7e-8};
  const GpModel m = condition(des, p);
  Vector far(1);
  far << 90.0;
  const double expected = p.process_variance * (1.0 + m.nugget_ratio() + 1.0 / m.rinv_one().sum());
  CHECK(m.var(far) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(m.corr_vector(far).norm() < 1e-100);
}

TEST_CASE("posterior covariance matrix is symmetric and PSD") {
  std::mt19937_64 rng(29);
  const Design des = oracle::random_design(10, 2, rng, wave);
  const GpModel m = fit(des);
  const int q = 25;
  Matrix c(q, q);
  std::vector<Vector> xs;
  for (int i = 0; i < q; ++i) xs.push_back(i < 5 ? Vector(des.points.row(i).transpose()) : oracle::uniform_point(2, rng));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) c(i, j) = m.cov(xs[i], xs[j]);
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8 * m.params().process_variance);
  for (int i = 0; i < q; ++i) CHECK(m.var(xs[i]) >= 0.0);
}

TEST_CASE("update without refit equals conditioning on the extended design") {
  std::mt19937_64 rng(31);
  const Design des = oracle::random_design(7, 2, rng, wave);
  const GpModel m = fit(des);
  const Vector xn = oracle::uniform_point(2, rng);
  const GpModel up = update(m, xn, wave(xn), false);
  const GpModel direct = condition(des.with_point(xn, wave(xn)), m.params());
  CHECK(up.design().size() == 8);
  CHECK(up.params().lengthscales == m.params().lengthscales);
  CHECK(up.mean(xn) == doctest::Approx(wave(xn)).epsilon(1e-9));
  for (int k = 0; k < 20; ++k) {
    const Vector x = oracle::uniform_point(2, rng);
    CHECK(up.mean(x) == doctest::Approx(direct.mean(x)).epsilon(1e-9));
    CHECK(std::abs(up.var(x) - direct.var(x)) <= 1e-9 * m.params().process_variance);
    CHECK(up.var(x) <= m.var(x) + 1e-10 * m.params().process_variance);
  }
}

TEST_CASE("more data never increases variance with fixed hyperparameters") {
  std::mt19937_64 rng(37);
  const Design des = oracle::random_design(12, 3, rng, wave);
  const KernelParams p = random_params(3, rng);
  std::vector<Vector> probes;
  for (int k = 0; k < 30; ++k) probes.push_back(oracle::uniform_point(3, rng));
  Design sub{des.domain, des.points.topRows(2), des.outputs.head(2)};
  GpModel prev = condition(sub, p);
  for (int n = 3; n <= 12; ++n) {
    const GpModel next = update(prev, des.points.row(n - 1).transpose(), des.outputs[n - 1], false);
    for (const auto& x : probes) CHECK(next.var(x) <= prev.var(x) + 1e-10 * p.process_variance);
    prev = next;
  }
}

TEST_CASE("update with refit re-estimates hyperparameters") {
  std::mt19937_64 rng(41);
  const Design des = oracle::random_design(8, 2, rng, wave);
  const GpModel m = fit(des);
  const Vector xn = oracle::uniform_point(2, rng);
  const GpModel up = update(m, xn, wave(xn), true);
  CHECK(up.design().size() == 9);
  CHECK(up.mean(xn) == doctest::Approx(wave(xn)).epsilon(1e-9));
  const GpModel fresh = fit(up.design(), FitConfig{.warm_start = m.params().lengthscales});
  CHECK(up.log_likelihood() == doctest::Approx(fresh.log_likelihood()).epsilon(1e-12));
}

TEST_CASE("error paths") {
  std::mt19937_64 rng(43);
  const Design des = oracle::random_design(5, 2, rng, wave);
  const GpModel m = fit(des);

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  const Vector row = des.points.row(2).transpose();
  CHECK(code_of([&] { update(m, row, 1.0, false); }) == ErrorCode::DuplicatePoint);
  Vector near = row;
  near[0] += 1e-11;
  CHECK(code_of([&] { update(m, near, 1.0, false); }) == ErrorCode::DuplicatePoint);
  Vector outside(2);
  outside << 1.5, 0.5;
  CHECK(code_of([&] { update(m, outside, 1.0, false); }) == ErrorCode::Domain);

  Design dup = des;
  dup.points.row(1) = dup.points.row(0);
  CHECK(code_of([&] { fit(dup); }) == ErrorCode::InvalidDesign);
  Design one{des.domain, des.points.topRows(1), des.outputs.head(1)};
  CHECK_THROWS_AS(fit(one), Error);
  KernelParams bad{Vector::Constant(2, 0.3), -1.0, 0.0};
  CHECK(code_of([&] { condition(des, bad); }) == ErrorCode::Parameter);
  BoxDomain inverted{{1.0}, {0.0}};
  CHECK_THROWS_AS(inverted.validate(), Error);
}

TEST_CASE("near-duplicate rows escalate the nugget") {
  Design des{BoxDomain::unit(1), Matrix(4, 1), Vector(4)};
  des.points << 0.1, 0.5, 0.5 + 1e-7, 0.9;
  des.outputs << 0.0, 1.0, 1.0 + 1e-7, 0.5;
  KernelParams p{Vector::Constant(1, 5.0), 1.0, 1e-8};
  const GpModel m = condition(des, p);
  CHECK(m.nugget_ratio() >= 1e-8);
  CHECK(m.nugget_ratio() <= 1e-4);
  CHECK(std::isfinite(m.mean(Vector::Constant(1, 0.3))));
}

TEST_CASE("fit is seed deterministic") {
  std::mt19937_64 rng(47);
  const Design des = oracle::random_design(9, 3, rng, wave);
  const GpModel a = fit(des), b = fit(des);
  CHECK(a.params().lengthscales == b.params().lengthscales);
  CHECK(a.log_likelihood() == b.log_likelihood());
}
