// Command-line front end: adaptive-design experiments, baselines and metrics.

#include "vigf/benchfns.hpp"
#include "vigf/criteria.hpp"
#include "vigf/design_metrics.hpp"
#include "vigf/runner.hpp"
#include "vigf/serialize.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

using vigf::ErrorCode;
using vigf::ExperimentConfig;
using vigf::Json;

struct RunFlags {
  std::string config_path;
  std::optional<std::string> fn;
  std::optional<std::string> criterion;
  std::optional<int> reps, budget_mult, init_mult, budget, n_init, q, refit_every;
  std::optional<int> low_init_mult, mf_budget_mult, n_init_low, test_size, lhs_sweeps;
  std::optional<int> de_pop, de_gens, de_scan, fit_pop, fit_gens, fit_restarts, audit_probes, threads;
  std::optional<std::uint64_t> seed;
  std::string out = "results.json";
  std::string csv;
  bool timings = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_q, bool with_mf) {
  cmd->add_option("--config", f.config_path, "JSON file mirroring the experiment config; flags override it");
  cmd->add_option("--fn", f.fn, "benchmark id (see list-functions)");
  cmd->add_option("--criterion", f.criterion, "vigf | eigf | mse | vigf_hk | eigf_hk | mse_hk");
  cmd->add_option("--reps", f.reps, "repetitions (seeds seed, seed+1, ...)");
  cmd->add_option("--budget-mult", f.budget_mult, "total evaluations = budget-mult * d");
  cmd->add_option("--init-mult", f.init_mult, "initial design = init-mult * d");
  cmd->add_option("--budget", f.budget, "explicit total evaluations (overrides --budget-mult)");
  cmd->add_option("--n-init", f.n_init, "explicit initial design size");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--refit-every", f.refit_every, "re-estimate hyperparameters every k updates");
  cmd->add_option("--test-size", f.test_size, "test points for NRMSE");
  cmd->add_option("--lhs-sweeps", f.lhs_sweeps, "maximin swap proposals per initial design");
  cmd->add_option("--de-pop", f.de_pop, "criterion DE population (0 = max(10d, 40))");
  cmd->add_option("--de-gens", f.de_gens, "criterion DE generations");
  cmd->add_option("--de-scan", f.de_scan, "random scan points per DE member before evolution (0 = off)");
  cmd->add_option("--fit-pop", f.fit_pop, "likelihood DE population");
  cmd->add_option("--fit-gens", f.fit_gens, "likelihood DE generations");
  cmd->add_option("--fit-restarts", f.fit_restarts, "likelihood DE restarts");
  cmd->add_option("--audit-probes", f.audit_probes, "audit each selection against N random probes");
  cmd->add_option("--threads", f.threads, "worker threads for repetitions");
  cmd->add_option("--out", f.out, "results JSON path");
  cmd->add_option("--csv", f.csv, "flat trace CSV path (default: --out with .csv)");
  cmd->add_flag("--timings", f.timings, "include wall-clock seconds per iteration");
  if (with_q) cmd->add_option("--q", f.q, "batch size");
  if (with_mf) {
    cmd->add_option("--low-init-mult", f.low_init_mult, "low-fidelity initial design = mult * d");
    cmd->add_option("--mf-budget-mult", f.mf_budget_mult, "combined budget = mult * d");
    cmd->add_option("--n-init-low", f.n_init_low, "explicit low-fidelity initial size");
  }
}

template <typename T>
void apply(const std::optional<T>& v, T& dst) {
  if (v) dst = *v;
}

ExperimentConfig build_config(const RunFlags& f, ExperimentConfig base) {
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw vigf::Error(ErrorCode::Io, "cannot open config " + f.config_path);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw vigf::Error(ErrorCode::Parameter, std::string("config JSON: ") + e.what());
    }
    base = vigf::config_from_json(j, base);
  }
  apply(f.fn, base.function);
  if (f.criterion) base.criterion = vigf::parse_criterion(*f.criterion);
  apply(f.reps, base.repetitions);
  apply(f.budget_mult, base.budget_mult);
  apply(f.init_mult, base.init_mult);
  apply(f.budget, base.budget);
  apply(f.n_init, base.n_init);
  apply(f.q, base.q);
  apply(f.seed, base.seed);
  apply(f.refit_every, base.refit_every);
  apply(f.low_init_mult, base.low_init_mult);
  apply(f.mf_budget_mult, base.mf_budget_mult);
  apply(f.n_init_low, base.n_init_low);
  apply(f.test_size, base.test_size);
  apply(f.lhs_sweeps, base.lhs_sweeps);
  apply(f.de_pop, base.selection_de.population_size);
  apply(f.de_gens, base.selection_de.generations);
  apply(f.de_scan, base.selection_de.init_scan);
  apply(f.fit_pop, base.fit.de.population_size);
  apply(f.fit_gens, base.fit.de.generations);
  apply(f.fit_restarts, base.fit.restarts);
  apply(f.audit_probes, base.audit_probes);
  apply(f.threads, base.threads);
  vigf::benchmark(base.function);  // validates the id early
  return base;
}

void write_outputs(const RunFlags& f, const ExperimentConfig& config, const std::vector<vigf::RunRecord>& records) {
  std::string csv_path = f.csv;
  if (csv_path.empty()) csv_path = std::filesystem::path(f.out).replace_extension(".csv").string();
  vigf::write_results(f.out, csv_path, config, records, f.timings);
  std::cout << "wrote " << f.out << " and " << csv_path << "\n";
}

int list_functions(bool as_json) {
  Json rows = Json::array();
  for (const auto id : vigf::all_benchmarks()) {
    const auto& fn = vigf::benchmark(id);
    std::string pair = vigf::has_fidelity_pair(id) ? vigf::fidelity_pair(id).low.key : "";
    rows.push_back(Json{{"id", fn.key}, {"name", fn.name}, {"d", fn.dim}, {"scale", fn.scale}, {"fidelity_pair", pair}});
  }
  if (as_json) {
    std::cout << rows.dump(1) << "\n";
    return 0;
  }
  std::cout << std::left << std::setw(8) << "id" << std::setw(32) << "name" << std::setw(4) << "d" << std::setw(8)
            << "scale" << "low-fidelity\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(8) << r["id"].get<std::string>() << std::setw(32) << r["name"].get<std::string>()
              << std::setw(4) << r["d"].get<int>() << std::setw(8) << r["scale"].get<std::string>()
              << r["fidelity_pair"].get<std::string>() << "\n";
  }
  return 0;
}

void print_error(ErrorCode code, const std::string& message) {
  std::cerr << Json{{"error", {{"code", std::string(vigf::error_code_name(code))}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive design of experiments for Gaussian-process emulators"};
  app.require_subcommand(1);

  RunFlags seq, batch, mf, lhs;
  auto* run_cmd = app.add_subcommand("run", "sequential adaptive design (one point per iteration)");
  add_run_flags(run_cmd, seq, false, false);
  auto* batch_cmd = app.add_subcommand("run-batch", "batch adaptive design with PVIGF");
  add_run_flags(batch_cmd, batch, true, false);
  auto* mf_cmd = app.add_subcommand("run-mf", "two-fidelity adaptive design with hierarchical kriging");
  add_run_flags(mf_cmd, mf, false, true);
  auto* lhs_cmd = app.add_subcommand("baseline-lhs", "one-shot maximin LHS baseline at sizes init-mult*d .. budget-mult*d");
  add_run_flags(lhs_cmd, lhs, false, false);

  std::string design_path;
  auto* disc_cmd = app.add_subcommand("discrepancy", "L2 star discrepancy of a design CSV on [0,1]^d");
  disc_cmd->add_option("--design", design_path, "design CSV")->required();

  bool list_json = false;
  auto* list_cmd = app.add_subcommand("list-functions", "benchmark functions");
  list_cmd->add_flag("--json", list_json, "JSON output");

  std::string surf_fn = "f1", surf_crit = "vigf", surf_level = "high", surf_out = "surface.csv";
  int surf_n = 0, surf_n_low = 0, surf_grid = 41;
  std::uint64_t surf_seed = 7;
  auto* surf_cmd = app.add_subcommand("surface", "export a criterion surface on a grid after fitting a maximin LHS");
  surf_cmd->add_option("--fn", surf_fn, "benchmark id");
  surf_cmd->add_option("--criterion", surf_crit, "criterion name");
  surf_cmd->add_option("--level", surf_level, "low | high (two-fidelity criteria)");
  surf_cmd->add_option("--n-init", surf_n, "design size (default 3d)");
  surf_cmd->add_option("--n-init-low", surf_n_low, "low-fidelity design size (default 10d)");
  surf_cmd->add_option("--grid", surf_grid, "grid points per axis");
  surf_cmd->add_option("--seed", surf_seed, "design seed");
  surf_cmd->add_option("--out", surf_out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(ErrorCode::Usage, e.what());
    return 2;
  }

  try {
    if (*run_cmd) {
      const auto cfg = build_config(seq, ExperimentConfig{});
      write_outputs(seq, cfg, vigf::run_sequential(cfg));
    } else if (*batch_cmd) {
      ExperimentConfig base;
      base.q = 4;
      const auto cfg = build_config(batch, base);
      write_outputs(batch, cfg, vigf::run_batch(cfg));
    } else if (*mf_cmd) {
      ExperimentConfig base;
      base.function = "f10";
      base.criterion = vigf::CriterionKind::VigfHk;
      const auto cfg = build_config(mf, base);
      write_outputs(mf, cfg, vigf::run_multifidelity(cfg));
    } else if (*lhs_cmd) {
      const auto cfg = build_config(lhs, ExperimentConfig{});
      write_outputs(lhs, cfg, vigf::run_lhs_baseline(cfg));
    } else if (*disc_cmd) {
      std::ifstream in(design_path);
      if (!in) throw vigf::Error(ErrorCode::Io, "cannot open " + design_path);
      const auto design = vigf::read_design_csv(in);
      std::cout << std::setprecision(17) << vigf::discrepancy_l2(design.points) << "\n";
    } else if (*list_cmd) {
      return list_functions(list_json);
    } else if (*surf_cmd) {
      const auto& fn = vigf::benchmark(surf_fn);
      const auto kind = vigf::parse_criterion(surf_crit);
      const int d = fn.dim;
      vigf::FitConfig fc;
      fc.de.seed = surf_seed;
      std::ofstream out(surf_out);
      if (!out) throw vigf::Error(ErrorCode::Io, "cannot write " + surf_out);
      auto make_design = [&](const vigf::BenchmarkFn& f, int n, std::uint64_t stream) {
        vigf::Design des{vigf::BoxDomain::unit(d), vigf::lhs_maximin(n, d, vigf::mix_seed(surf_seed, stream)), {}};
        des.outputs.resize(n);
        for (int i = 0; i < n; ++i) des.outputs[i] = f(des.points.row(i).transpose());
        return des;
      };
      if (vigf::is_hk(kind)) {
        const auto pair = vigf::fidelity_pair(fn.id);
        const auto level = surf_level == "low" ? vigf::FidelityLevel::Low : vigf::FidelityLevel::High;
        const auto low = vigf::fit(make_design(pair.low, surf_n_low > 0 ? surf_n_low : 10 * d, 1), fc);
        const auto hk = vigf::fit_hk(low, make_design(pair.high, surf_n > 0 ? surf_n : 3 * d, 0), fc);
        vigf::write_surface_csv(out, [&](const vigf::Vector& x) { return vigf::criterion_hk(hk, x, level, kind); },
                                vigf::BoxDomain::unit(d), surf_grid);
      } else {
        const auto gp = vigf::fit(make_design(fn, surf_n > 0 ? surf_n : 3 * d, 0), fc);
        vigf::write_surface_csv(out, [&](const vigf::Vector& x) { return vigf::criterion(gp, x, kind); },
                                vigf::BoxDomain::unit(d), surf_grid);
      }
      std::cout << "wrote " << surf_out << "\n";
    }
  } catch (const vigf::Error& e) {
    print_error(e.code(), e.what());
    return e.code() == ErrorCode::Usage ? 2 : 1;
  } catch (const std::exception& e) {
    print_error(ErrorCode::Io, e.what());
    return 1;
  }
  return 0;
}
