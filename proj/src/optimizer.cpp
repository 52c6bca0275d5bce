#include "vigf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace vigf {

namespace {

double checked_eval(const Objective& objective, const Vector& x) {
  const double v = objective(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "objective returned " << v << " at x = (";
    for (int j = 0; j < x.size(); ++j) msg << (j ? ", " : "") << x[j];
    msg << ")";
    throw Error(ErrorCode::Objective, msg.str());
  }
  return v;
}

double reflect_into(double v, double lo, double hi, std::mt19937_64& rng) {
  if (v < lo) v = lo + (lo - v);
  if (v > hi) v = hi - (v - hi);
  if (v < lo || v > hi) v = std::uniform_real_distribution<double>(lo, hi)(rng);
  return v;
}

}  // namespace

int DeConfig::resolved_population(int dim) const {
  return population_size > 0 ? population_size : std::max(10 * dim, 40);
}

void DeConfig::validate(int dim) const {
  if (resolved_population(dim) < 4) throw Error(ErrorCode::Parameter, "DE population must be at least 4");
  if (generations < 1) throw Error(ErrorCode::Parameter, "DE needs at least one generation");
  if (!(differential_weight > 0.0 && differential_weight < 2.0)) {
    throw Error(ErrorCode::Parameter, "DE differential weight must lie in (0, 2)");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw Error(ErrorCode::Parameter, "DE crossover rate must lie in [0, 1]");
  }
  if (init_scan < 0) throw Error(ErrorCode::Parameter, "DE initial scan factor must be >= 0");
}

DeResult de_maximize(const Objective& objective, const BoxDomain& domain, const DeConfig& config,
                     std::span<const Vector> initial) {
  domain.validate();
  const int d = domain.dim();
  config.validate(d);
  const int np = config.resolved_population(d);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<Vector> pop(np, Vector(d));
  for (auto& member : pop) {
    for (int j = 0; j < d; ++j) member[j] = domain.lower[j] + unif(rng) * domain.width(j);
  }
  const std::size_t n_seeded = std::min<std::size_t>(initial.size(), static_cast<std::size_t>(np));
  for (std::size_t k = 0; k < n_seeded; ++k) {
    if (initial[k].size() != d) throw Error(ErrorCode::Parameter, "warm start has wrong dimension");
    for (int j = 0; j < d; ++j) pop[k][j] = std::clamp(initial[k][j], domain.lower[j], domain.upper[j]);
  }

  DeResult result;
  if (config.init_scan > 0) {
    const int n_scan = config.init_scan * np;
    std::vector<std::pair<double, Vector>> scan;
    scan.reserve(static_cast<std::size_t>(n_scan));
    Vector x(d);
    for (int k = 0; k < n_scan; ++k) {
      for (int j = 0; j < d; ++j) x[j] = domain.lower[j] + unif(rng) * domain.width(j);
      scan.emplace_back(checked_eval(objective, x), x);
    }
    result.evaluations += n_scan;
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(np / 2), np - n_seeded);
    std::partial_sort(scan.begin(), scan.begin() + static_cast<std::ptrdiff_t>(keep), scan.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; k < keep; ++k) pop[n_seeded + k] = scan[k].second;
  }

  std::vector<double> fit(np);
  for (int i = 0; i < np; ++i) fit[i] = checked_eval(objective, pop[i]);
  result.evaluations += np;

  auto best_index = [&] { return static_cast<int>(std::max_element(fit.begin(), fit.end()) - fit.begin()); };
  result.best_history.reserve(config.generations + 1);
  result.best_history.push_back(fit[best_index()]);

  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> pick_dim(0, d - 1);
  std::vector<Vector> trials(np, Vector(d));
  std::vector<double> trial_fit(np);

  for (int g = 0; g < config.generations; ++g) {
    for (int i = 0; i < np; ++i) {
      int r1, r2, r3;
      do { r1 = pick(rng); } while (r1 == i);
      do { r2 = pick(rng); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);
      const int jrand = pick_dim(rng);
      for (int j = 0; j < d; ++j) {
        const bool cross = unif(rng) < config.crossover_rate || j == jrand;
        double v = cross ? pop[r1][j] + config.differential_weight * (pop[r2][j] - pop[r3][j]) : pop[i][j];
        trials[i][j] = reflect_into(v, domain.lower[j], domain.upper[j], rng);
      }
    }
    // Selection happens after the whole generation is evaluated, so the
    // outcome does not depend on evaluation order.
    for (int i = 0; i < np; ++i) trial_fit[i] = checked_eval(objective, trials[i]);
    result.evaluations += np;
    for (int i = 0; i < np; ++i) {
      if (trial_fit[i] >= fit[i]) {
        pop[i] = trials[i];
        fit[i] = trial_fit[i];
      }
    }
    result.best_history.push_back(fit[best_index()]);
  }

  const int b = best_index();
  result.x = pop[b];
  result.value = fit[b];
  return result;
}

bool random_probe_audit(const Objective& objective, const BoxDomain& domain, const VectorRef& candidate,
                        int n_probes, std::uint64_t seed) {
  if (n_probes < 1) throw Error(ErrorCode::Parameter, "audit needs at least one probe");
  const double at_candidate = objective(candidate);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector probe(domain.dim());
  for (int k = 0; k < n_probes; ++k) {
    for (int j = 0; j < domain.dim(); ++j) probe[j] = domain.lower[j] + unif(rng) * domain.width(j);
    if (objective(probe) > at_candidate) return false;
  }
  return true;
}

}  // namespace vigf
