#pragma once

#include "vigf/common.hpp"

#include <functional>
#include <span>

namespace vigf {

using Objective = std::function<double(const Vector&)>;

/// DE/rand/1/bin settings. A population size of 0 means max(10 d, 40).
struct DeConfig {
  int population_size = 0;
  int generations = 200;
  double differential_weight = 0.8;
  double crossover_rate = 0.9;
  std::uint64_t seed = 0;
  /// When > 0, init_scan * population uniform points are evaluated first and
  /// the best of them fill half of the starting population.
  int init_scan = 0;

  int resolved_population(int dim) const;
  void validate(int dim) const;
};

struct DeResult {
  Vector x;
  double value = 0.0;
  /// Best objective value after initialization and after each generation.
  std::vector<double> best_history;
  long evaluations = 0;
};

/// Maximizes `objective` over `domain`. Trial vectors that leave the box are
/// reflected back inside. `initial` rows, if any, replace the first members of
/// the random starting population (warm starts).
DeResult de_maximize(const Objective& objective, const BoxDomain& domain, const DeConfig& config,
                     std::span<const Vector> initial = {});

/// True iff objective(candidate) >= objective(p) for `n_probes` uniform probes p.
bool random_probe_audit(const Objective& objective, const BoxDomain& domain, const VectorRef& candidate,
                        int n_probes, std::uint64_t seed);

}  // namespace vigf
