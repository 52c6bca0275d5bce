#pragma once

#include "vigf/benchfns.hpp"
#include "vigf/criteria.hpp"
#include "vigf/design_metrics.hpp"
#include "vigf/gp.hpp"

#include <optional>
#include <string>

namespace vigf {

/// One experiment: a function, a criterion and budgets, repeated over seeds
/// base_seed + rep. Zero-valued counts are derived from the multipliers and d.
struct ExperimentConfig {
  std::string function = "f2";
  CriterionKind criterion = CriterionKind::Vigf;
  int init_mult = 3;
  int budget_mult = 30;
  int n_init = 0;
  int budget = 0;
  int q = 1;
  int repetitions = 10;
  std::uint64_t seed = 7;
  int refit_every = 1;
  // Two-fidelity runs: 3d high + 10d low initial runs, 27d combined budget.
  int low_init_mult = 10;
  int mf_budget_mult = 27;
  int n_init_low = 0;
  int test_size = 3000;
  int lhs_sweeps = 10000;
  DeConfig selection_de{.init_scan = 20};
  FitConfig fit{};
  /// When > 0, every adaptive selection is audited against this many random probes.
  int audit_probes = 0;
  /// Worker threads for repetitions; 0 means hardware concurrency.
  int threads = 0;

  int resolved_n_init(int dim) const { return n_init > 0 ? n_init : init_mult * dim; }
  int resolved_budget(int dim) const { return budget > 0 ? budget : budget_mult * dim; }
  int resolved_n_init_low(int dim) const { return n_init_low > 0 ? n_init_low : low_init_mult * dim; }
  int resolved_mf_budget(int dim) const { return budget > 0 ? budget : mf_budget_mult * dim; }
};

struct TracePoint {
  int n_evals = 0;
  double nrmse = 0.0;
};

struct IterationRecord {
  std::vector<Vector> points;
  std::vector<int> levels;  // 1 = low, 2 = high
  std::vector<double> criterion_values;
  int n_evals = 0;
  double nrmse = 0.0;
  double seconds = 0.0;
  std::optional<bool> audit_passed;
};

struct RunRecord {
  std::string function;
  std::string criterion;
  std::string mode;  // sequential | batch | multifidelity | lhs
  int rep = 0;
  std::uint64_t seed = 0;
  int q = 1;
  int evaluations = 0;
  int high_evaluations = 0;
  int low_evaluations = 0;
  /// NRMSE after the initial fit and after every update.
  std::vector<TracePoint> trace;
  std::vector<IterationRecord> iterations;
  Design final_design;
  std::optional<Design> final_low_design;
};

/// Fixed test set of a benchmark (uniform points, seed derived from the function id).
TestSet function_test_set(const BenchmarkFn& fn, int n_t);

RunRecord run_sequential_once(const ExperimentConfig& config, int rep);
RunRecord run_batch_once(const ExperimentConfig& config, int rep);
RunRecord run_multifidelity_once(const ExperimentConfig& config, int rep);
/// One-shot baseline: for each size a GP is fit on a fresh maximin LHS.
RunRecord run_lhs_baseline_once(const ExperimentConfig& config, int rep, const std::vector<int>& sizes);

std::vector<RunRecord> run_sequential(const ExperimentConfig& config);
std::vector<RunRecord> run_batch(const ExperimentConfig& config);
std::vector<RunRecord> run_multifidelity(const ExperimentConfig& config);
/// Empty `sizes` means init_mult d, (init_mult + 1) d, ..., budget_mult d.
std::vector<RunRecord> run_lhs_baseline(const ExperimentConfig& config, std::vector<int> sizes = {});

struct Aggregate {
  std::vector<int> n_evals;
  std::vector<double> median_nrmse;
  /// L2 discrepancy of each record's final (high-fidelity) design.
  std::vector<double> discrepancy;

  /// Median NRMSE at the largest recorded count <= n_evals.
  double median_at(int n_evals) const;
};

/// Per-evaluation-count median across records. Traces are aligned on n_evals
/// and each is carried forward at its last value where it has no entry.
Aggregate aggregate(const std::vector<RunRecord>& records);

double median(std::vector<double> values);

}  // namespace vigf
