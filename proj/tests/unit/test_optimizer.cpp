#include "doctest.h"

#include "vigf/optimizer.hpp"

#include <cmath>
#include <limits>

using namespace vigf;

namespace {

double quad(const Vector& x) { return -(x.array() - 0.5).square().sum(); }
double wiggle(const Vector& x) { return std::sin(10.0 * x[0]) + x[0]; }

double grid_max_1d(double (*f)(const Vector&), int n) {
  double best = -std::numeric_limits<double>::infinity();
  Vector x(1);
  for (int i = 0; i < n; ++i) {
    x[0] = static_cast<double>(i) / (n - 1);
    best = std::max(best, f(x));
  }
  return best;
}

}  // namespace

TEST_CASE("quadratic maximum") {
  const DeResult r = de_maximize(quad, BoxDomain::unit(3), DeConfig{.seed = 1});
  CHECK((r.x.array() - 0.5).abs().maxCoeff() < 1e-3);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(random_probe_audit(quad, BoxDomain::unit(3), Vector::Constant(3, 0.5), 1000, 3));
  CHECK_FALSE(random_probe_audit(quad, BoxDomain::unit(3), Vector::Zero(3), 1000, 3));
}

TEST_CASE("constant objective") {
  const DeResult r = de_maximize([](const Vector&) { return 2.5; }, BoxDomain::unit(2), DeConfig{.generations = 5});
  CHECK(r.value == 2.5);
  CHECK(BoxDomain::unit(2).contains(r.x));
}

TEST_CASE("multimodal 1-D against a grid scan") {
  const double oracle = grid_max_1d(wiggle, 100001);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DeResult r = de_maximize(wiggle, BoxDomain::unit(1), DeConfig{.seed = seed});
    CHECK(std::abs(r.value - oracle) < 1e-3);
    CHECK(random_probe_audit(wiggle, BoxDomain::unit(1), r.x, 10000, seed + 100));
  }
}

TEST_CASE("non-unit box, monotone history, feasibility, evaluation count") {
  const BoxDomain box{{-2.0, 10.0}, {3.0, 11.0}};
  std::vector<Vector> seen;
  auto g = [](const Vector& x) { return -std::pow(x[0] - 2.9, 2) - std::pow(x[1] - 10.1, 2); };
  auto f = [&](const Vector& x) {
    seen.push_back(x);
    return g(x);
  };
  const DeConfig cfg{.population_size = 15, .generations = 60, .seed = 9};
  const DeResult r = de_maximize(f, box, cfg);
  CHECK(r.best_history.size() == 61);
  for (std::size_t k = 1; k < r.best_history.size(); ++k) CHECK(r.best_history[k] >= r.best_history[k - 1]);
  CHECK(r.evaluations == static_cast<long>(seen.size()));
  CHECK(r.evaluations == 15 * 61);
  double best = -1e300;
  for (const auto& x : seen) {
    CHECK(box.contains(x));
    best = std::max(best, g(x));
  }
  CHECK(r.value == best);
  CHECK(std::abs(r.x[0] - 2.9) < 1e-3);
  CHECK(std::abs(r.x[1] - 10.1) < 1e-3);
}

TEST_CASE("seed determinism") {
  const DeConfig cfg{.generations = 40, .seed = 5};
  const DeResult a = de_maximize(wiggle, BoxDomain::unit(1), cfg);
  const DeResult b = de_maximize(wiggle, BoxDomain::unit(1), cfg);
  CHECK(a.x == b.x);
  CHECK(a.best_history == b.best_history);
  const DeResult c = de_maximize(quad, BoxDomain::unit(2), DeConfig{.generations = 3, .seed = 6});
  const DeResult d = de_maximize(quad, BoxDomain::unit(2), DeConfig{.generations = 3, .seed = 7});
  CHECK(c.x != d.x);
}

TEST_CASE("warm start enters the population") {
  Vector start(2);
  start << 0.5, 0.5;
  const std::vector<Vector> init{start};
  const DeResult r = de_maximize(quad, BoxDomain::unit(2), DeConfig{.population_size = 4, .generations = 1, .seed = 2},
                                 std::span<const Vector>(init));
  CHECK(r.value == 0.0);
}

TEST_CASE("initial scan seeds the population") {
  // A narrow spike far from a broad bump: the scan finds the spike's basin.
  auto f = [](const Vector& x) {
    return std::exp(-std::pow((x[0] - 0.93) / 0.004, 2)) * 2.0 + 0.5 * std::exp(-std::pow((x[0] - 0.3) / 0.2, 2));
  };
  const DeConfig cfg{.population_size = 10, .generations = 30, .seed = 3, .init_scan = 40};
  const DeResult r = de_maximize(f, BoxDomain::unit(1), cfg);
  CHECK(r.evaluations == 10 * 40 + 10 * 31);
  CHECK(std::abs(r.x[0] - 0.93) < 1e-4);
  CHECK_THROWS_AS(DeConfig{.init_scan = -1}.validate(1), Error);
}

TEST_CASE("defaults and config validation") {
  CHECK(DeConfig{}.resolved_population(2) == 40);
  CHECK(DeConfig{}.resolved_population(7) == 70);
  CHECK_THROWS_AS(DeConfig{.population_size = 3}.validate(1), Error);
  CHECK_THROWS_AS(DeConfig{.generations = 0}.validate(1), Error);
  CHECK_THROWS_AS(DeConfig{.differential_weight = 2.0}.validate(1), Error);
  CHECK_THROWS_AS(DeConfig{.crossover_rate = 1.5}.validate(1), Error);
}

TEST_CASE("non-finite objective is reported") {
  auto f = [](const Vector& x) { return x[0] > 0.5 ? std::nan("") : x[0]; };
  try {
    de_maximize(f, BoxDomain::unit(1), DeConfig{.seed = 1});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Objective);
  }
}
