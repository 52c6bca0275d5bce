#include "vigf/runner.hpp"

#include "vigf/hk.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <thread>

namespace vigf {

namespace {

using Clock = std::chrono::steady_clock;

// Seed streams within one repetition.
constexpr std::uint64_t kStreamInit = 0;
constexpr std::uint64_t kStreamInitLow = 1;
constexpr std::uint64_t kStreamFit = 1000;
constexpr std::uint64_t kStreamSelect = 1000000;
constexpr std::uint64_t kStreamAudit = 2000000;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Design evaluate_design(const BenchmarkFn& fn, const Matrix& unit_points) {
  Design d{BoxDomain::unit(fn.dim), unit_points, Vector(unit_points.rows())};
  for (Eigen::Index i = 0; i < unit_points.rows(); ++i) d.outputs[i] = fn(unit_points.row(i).transpose());
  return d;
}

FitConfig fit_config(const ExperimentConfig& c, std::uint64_t rep_seed, std::uint64_t step) {
  FitConfig f = c.fit;
  f.de.seed = mix_seed(rep_seed, kStreamFit + step);
  return f;
}

DeConfig select_config(const ExperimentConfig& c, std::uint64_t rep_seed, std::uint64_t step, int attempt) {
  DeConfig d = c.selection_de;
  d.seed = mix_seed(rep_seed, kStreamSelect + 2 * step + static_cast<std::uint64_t>(attempt));
  return d;
}

RunRecord start_record(const ExperimentConfig& c, const char* mode, int rep) {
  RunRecord r;
  r.function = benchmark(c.function).key;
  r.criterion = std::string(criterion_name(c.criterion));
  r.mode = mode;
  r.rep = rep;
  r.seed = c.seed + static_cast<std::uint64_t>(rep);
  r.q = c.q;
  return r;
}

void check_budget(int n_init, int budget) {
  if (n_init < 2) throw Error(ErrorCode::Parameter, "initial design needs at least 2 points");
  if (budget < n_init) throw Error(ErrorCode::Parameter, "budget must be at least the initial design size");
}

// Runs the selection, retrying once with a fresh seed if the argmax lands on a design row.
template <typename Select>
auto select_distinct(const Design& design, Select&& select) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto sel = select(attempt);
    if (design.min_unit_distance(sel.x) > kDuplicateThreshold) return sel;
  }
  throw Error(ErrorCode::DuplicatePoint, "adaptive selection returned an existing design point twice");
}

template <typename Fn>
std::vector<RunRecord> run_reps(const ExperimentConfig& c, Fn&& once) {
  if (c.repetitions < 1) throw Error(ErrorCode::Parameter, "repetitions must be >= 1");
  std::vector<RunRecord> out(static_cast<std::size_t>(c.repetitions));
  std::vector<std::exception_ptr> errors(out.size());
  unsigned workers = c.threads > 0 ? static_cast<unsigned>(c.threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(out.size()));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int rep = next++; rep < c.repetitions; rep = next++) {
      try {
        out[static_cast<std::size_t>(rep)] = once(c, rep);
      } catch (...) {
        errors[static_cast<std::size_t>(rep)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

TestSet function_test_set(const BenchmarkFn& fn, int n_t) {
  return uniform_test_set([&fn](const Vector& x) { return fn(x); }, fn.dim, n_t,
                          mix_seed(0x7e57u, static_cast<std::uint64_t>(fn.id)));
}

RunRecord run_sequential_once(const ExperimentConfig& c, int rep) {
  if (is_hk(c.criterion)) throw Error(ErrorCode::Usage, "sequential runs need a single-fidelity criterion");
  const BenchmarkFn& fn = benchmark(c.function);
  const int d = fn.dim;
  const int n_init = c.resolved_n_init(d);
  const int budget = c.resolved_budget(d);
  check_budget(n_init, budget);
  RunRecord rec = start_record(c, "sequential", rep);
  rec.q = 1;
  const std::uint64_t s = rec.seed;
  const TestSet test = function_test_set(fn, c.test_size);

  GpModel model = fit(evaluate_design(fn, lhs_maximin(n_init, d, mix_seed(s, kStreamInit), c.lhs_sweeps)),
                      fit_config(c, s, 0));
  auto score = [&](const GpModel& m) { return nrmse([&m](const Vector& x) { return m.mean(x); }, test); };
  int evals = n_init;
  rec.trace.push_back({evals, score(model)});

  for (int step = 1; evals < budget; ++step) {
    const auto t0 = Clock::now();
    const Selection sel = select_distinct(model.design(), [&](int attempt) {
      return select_next(model, c.criterion, select_config(c, s, static_cast<std::uint64_t>(step), attempt));
    });
    IterationRecord it;
    if (c.audit_probes > 0) {
      it.audit_passed = random_probe_audit([&](const Vector& x) { return criterion(model, x, c.criterion); },
                                           model.design().domain, sel.x, c.audit_probes,
                                           mix_seed(s, kStreamAudit + static_cast<std::uint64_t>(step)));
    }
    const double y = fn(sel.x);
    ++evals;
    const bool refit = step % std::max(1, c.refit_every) == 0;
    model = update(model, sel.x, y, refit, fit_config(c, s, static_cast<std::uint64_t>(step)));
    it.points.push_back(sel.x);
    it.levels.push_back(2);
    it.criterion_values.push_back(sel.value);
    it.n_evals = evals;
    it.nrmse = score(model);
    it.seconds = seconds_since(t0);
    rec.trace.push_back({evals, it.nrmse});
    rec.iterations.push_back(std::move(it));
  }
  rec.evaluations = rec.high_evaluations = evals;
  rec.final_design = model.design();
  return rec;
}

RunRecord run_batch_once(const ExperimentConfig& c, int rep) {
  if (c.q < 2) throw Error(ErrorCode::Parameter, "batch runs need q >= 2");
  if (c.criterion != CriterionKind::Vigf) throw Error(ErrorCode::Usage, "batch runs use the vigf criterion");
  const BenchmarkFn& fn = benchmark(c.function);
  const int d = fn.dim;
  const int n_init = c.resolved_n_init(d);
  const int budget = c.resolved_budget(d);
  check_budget(n_init, budget);
  RunRecord rec = start_record(c, "batch", rep);
  const std::uint64_t s = rec.seed;
  const TestSet test = function_test_set(fn, c.test_size);

  GpModel model = fit(evaluate_design(fn, lhs_maximin(n_init, d, mix_seed(s, kStreamInit), c.lhs_sweeps)),
                      fit_config(c, s, 0));
  auto score = [&](const GpModel& m) { return nrmse([&m](const Vector& x) { return m.mean(x); }, test); };
  int evals = n_init;
  rec.trace.push_back({evals, score(model)});

  for (int step = 1; evals < budget; ++step) {
    const auto t0 = Clock::now();
    const int q = std::min(c.q, budget - evals);
    std::vector<Selection> batch;
    if (q >= 2) {
      batch = select_batch(model, q, select_config(c, s, static_cast<std::uint64_t>(step), 0));
    } else {
      batch.push_back(select_distinct(model.design(), [&](int attempt) {
        return select_next(model, CriterionKind::Vigf, select_config(c, s, static_cast<std::uint64_t>(step), attempt));
      }));
    }
    IterationRecord it;
    if (c.audit_probes > 0) {
      // Each pick is audited against the PVIGF surface it maximized.
      bool ok = true;
      std::vector<Vector> prior;
      for (std::size_t k = 0; k < batch.size(); ++k) {
        ok = ok && random_probe_audit([&](const Vector& x) { return pvigf(model, x, prior); }, model.design().domain,
                                      batch[k].x, c.audit_probes,
                                      mix_seed(s, kStreamAudit + 64 * static_cast<std::uint64_t>(step) + k));
        prior.push_back(batch[k].x);
      }
      it.audit_passed = ok;
    }
    std::vector<double> ys;
    for (const auto& b : batch) ys.push_back(fn(b.x));
    evals += static_cast<int>(batch.size());
    const bool refit = step % std::max(1, c.refit_every) == 0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const bool last = k + 1 == batch.size();
      model = update(model, batch[k].x, ys[k], last && refit, fit_config(c, s, static_cast<std::uint64_t>(step)));
      it.points.push_back(batch[k].x);
      it.levels.push_back(2);
      it.criterion_values.push_back(batch[k].value);
    }
    it.n_evals = evals;
    it.nrmse = score(model);
    it.seconds = seconds_since(t0);
    rec.trace.push_back({evals, it.nrmse});
    rec.iterations.push_back(std::move(it));
  }
  rec.evaluations = rec.high_evaluations = evals;
  rec.final_design = model.design();
  return rec;
}

RunRecord run_multifidelity_once(const ExperimentConfig& c, int rep) {
  if (!is_hk(c.criterion)) throw Error(ErrorCode::Usage, "two-fidelity runs need vigf_hk, eigf_hk or mse_hk");
  const BenchmarkFn& base = benchmark(c.function);
  const FidelityPair pair = fidelity_pair(base.id);
  const int d = pair.high.dim;
  const int n_high = c.resolved_n_init(d);
  const int n_low = c.resolved_n_init_low(d);
  const int budget = c.resolved_mf_budget(d);
  check_budget(n_high, budget);
  if (n_low < 2 || n_high + n_low > budget) {
    throw Error(ErrorCode::Parameter, "two-fidelity budget must cover both initial designs");
  }
  RunRecord rec = start_record(c, "multifidelity", rep);
  rec.q = 1;
  const std::uint64_t s = rec.seed;
  const TestSet test = function_test_set(pair.high, c.test_size);

  const Design high0 = evaluate_design(pair.high, lhs_maximin(n_high, d, mix_seed(s, kStreamInit), c.lhs_sweeps));
  const Design low0 = evaluate_design(pair.low, lhs_maximin(n_low, d, mix_seed(s, kStreamInitLow), c.lhs_sweeps));
  HkModel model = fit_hk(fit(low0, fit_config(c, s, 0)), high0, fit_config(c, s, 1));
  auto score = [&](const HkModel& m) { return nrmse([&m](const Vector& x) { return m.mean(x); }, test); };
  int evals = n_high + n_low;
  int n_hi_evals = n_high;
  int n_lo_evals = n_low;
  rec.trace.push_back({evals, score(model)});

  for (int step = 1; evals < budget; ++step) {
    const auto t0 = Clock::now();
    HkSelection sel;
    for (int attempt = 0;; ++attempt) {
      sel = select_next_hk(model, c.criterion, select_config(c, s, static_cast<std::uint64_t>(step), attempt));
      const Design& target = sel.level == FidelityLevel::Low ? model.low_model().design() : model.high_design();
      if (target.min_unit_distance(sel.x) > kDuplicateThreshold) break;
      if (attempt == 1) throw Error(ErrorCode::DuplicatePoint, "two-fidelity selection returned an existing point twice");
    }
    IterationRecord it;
    if (c.audit_probes > 0) {
      // Audit over the joint (x, level) space: the chosen value must beat
      // random probes at both levels.
      const FidelityLevel chosen = sel.level;
      auto at_chosen = [&](const Vector& x) { return criterion_hk(model, x, chosen, c.criterion); };
      const double v = at_chosen(sel.x);
      bool ok = true;
      for (const FidelityLevel level : {FidelityLevel::Low, FidelityLevel::High}) {
        auto obj = [&](const Vector& x) { return x == sel.x ? v : criterion_hk(model, x, level, c.criterion); };
        ok = ok && random_probe_audit(obj, model.high_design().domain, sel.x, c.audit_probes,
                                      mix_seed(s, kStreamAudit + 2 * static_cast<std::uint64_t>(step) +
                                                      static_cast<std::uint64_t>(level)));
      }
      it.audit_passed = ok;
    }
    const bool refit = step % std::max(1, c.refit_every) == 0;
    const FitConfig fc = fit_config(c, s, static_cast<std::uint64_t>(step) + 1);
    if (sel.level == FidelityLevel::Low) {
      const double y = pair.low(sel.x);
      ++n_lo_evals;
      if (refit) {
        model = add_low_observation(model, sel.x, y, fc);
      } else {
        model = condition_hk(update(model.low_model(), sel.x, y, false), model.high_design(), model.params());
      }
    } else {
      const double y = pair.high(sel.x);
      ++n_hi_evals;
      if (refit) {
        model = add_high_observation(model, sel.x, y, fc);
      } else {
        model = condition_hk(model.low_model(), model.high_design().with_point(sel.x, y), model.params());
      }
    }
    ++evals;
    it.points.push_back(sel.x);
    it.levels.push_back(static_cast<int>(sel.level));
    it.criterion_values.push_back(sel.value);
    it.n_evals = evals;
    it.nrmse = score(model);
    it.seconds = seconds_since(t0);
    rec.trace.push_back({evals, it.nrmse});
    rec.iterations.push_back(std::move(it));
  }
  rec.evaluations = evals;
  rec.high_evaluations = n_hi_evals;
  rec.low_evaluations = n_lo_evals;
  rec.final_design = model.high_design();
  rec.final_low_design = model.low_model().design();
  return rec;
}

RunRecord run_lhs_baseline_once(const ExperimentConfig& c, int rep, const std::vector<int>& sizes) {
  const BenchmarkFn& fn = benchmark(c.function);
  RunRecord rec = start_record(c, "lhs", rep);
  rec.criterion = "lhs";
  rec.q = 1;
  const std::uint64_t s = rec.seed;
  const TestSet test = function_test_set(fn, c.test_size);
  for (const int n : sizes) {
    if (n < 2) throw Error(ErrorCode::Parameter, "baseline sizes must be >= 2");
    const auto un = static_cast<std::uint64_t>(n);
    const GpModel m = fit(evaluate_design(fn, lhs_maximin(n, fn.dim, mix_seed(s, kStreamInit + 7919 * un), c.lhs_sweeps)),
                          fit_config(c, s, un));
    rec.trace.push_back({n, nrmse([&m](const Vector& x) { return m.mean(x); }, test)});
    rec.final_design = m.design();
    rec.evaluations = rec.high_evaluations = n;
  }
  return rec;
}

std::vector<RunRecord> run_sequential(const ExperimentConfig& config) { return run_reps(config, run_sequential_once); }
std::vector<RunRecord> run_batch(const ExperimentConfig& config) { return run_reps(config, run_batch_once); }
std::vector<RunRecord> run_multifidelity(const ExperimentConfig& config) {
  return run_reps(config, run_multifidelity_once);
}

std::vector<RunRecord> run_lhs_baseline(const ExperimentConfig& config, std::vector<int> sizes) {
  if (sizes.empty()) {
    const int d = benchmark(config.function).dim;
    for (int m = config.init_mult; m <= config.budget_mult; ++m) sizes.push_back(m * d);
  }
  return run_reps(config, [&sizes](const ExperimentConfig& c, int rep) { return run_lhs_baseline_once(c, rep, sizes); });
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::Parameter, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double Aggregate::median_at(int n) const {
  double v = 0.0;
  bool found = false;
  for (std::size_t k = 0; k < n_evals.size(); ++k) {
    if (n_evals[k] <= n) {
      v = median_nrmse[k];
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::Parameter, "no aggregate entry at or below " + std::to_string(n) + " evaluations");
  return v;
}

Aggregate aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::Parameter, "aggregate needs at least one record");
  std::map<int, std::vector<double>> by_count;
  for (const auto& r : records) {
    for (const auto& t : r.trace) by_count[t.n_evals];
  }
  for (const auto& r : records) {
    std::size_t k = 0;
    double last = 0.0;
    bool started = false;
    for (auto& [n, values] : by_count) {
      while (k < r.trace.size() && r.trace[k].n_evals <= n) {
        last = r.trace[k].nrmse;
        started = true;
        ++k;
      }
      if (started) values.push_back(last);
    }
  }
  Aggregate a;
  for (const auto& [n, values] : by_count) {
    if (values.empty()) continue;
    a.n_evals.push_back(n);
    a.median_nrmse.push_back(median(values));
  }
  for (const auto& r : records) {
    if (r.final_design.size() > 0) a.discrepancy.push_back(discrepancy_l2(r.final_design.points));
  }
  return a;
}

}  // namespace vigf
