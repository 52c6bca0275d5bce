#include "vigf/serialize.hpp"

#include <fstream>
#include <iomanip>

namespace vigf {

namespace {

Json vec_json(const VectorRef& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Json to_json(const BoxDomain& domain) { return Json{{"lower", domain.lower}, {"upper", domain.upper}}; }

Json to_json(const Design& design) {
  Json pts = Json::array();
  for (int i = 0; i < design.size(); ++i) pts.push_back(vec_json(design.points.row(i).transpose()));
  return Json{{"domain", to_json(design.domain)}, {"points", pts}, {"outputs", vec_json(design.outputs)}};
}

Json to_json(const KernelParams& p) {
  return Json{{"lengthscales", vec_json(p.lengthscales)}, {"process_variance", p.process_variance}, {"nugget", p.nugget}};
}

Json to_json(const GpModel& m) {
  return Json{{"kind", "gp"}, {"design", to_json(m.design())}, {"params", to_json(m.params())}, {"mu_hat", m.mu_hat()}};
}

Json to_json(const HkModel& m) {
  return Json{{"kind", "hk"},
              {"low_model", to_json(m.low_model())},
              {"high_design", to_json(m.high_design())},
              {"params", to_json(m.params())},
              {"beta_hat", m.beta_hat()}};
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"function", c.function},
              {"criterion", std::string(criterion_name(c.criterion))},
              {"init_mult", c.init_mult},
              {"budget_mult", c.budget_mult},
              {"n_init", c.n_init},
              {"budget", c.budget},
              {"q", c.q},
              {"reps", c.repetitions},
              {"seed", c.seed},
              {"refit_every", c.refit_every},
              {"low_init_mult", c.low_init_mult},
              {"mf_budget_mult", c.mf_budget_mult},
              {"n_init_low", c.n_init_low},
              {"test_size", c.test_size},
              {"lhs_sweeps", c.lhs_sweeps},
              {"de_population", c.selection_de.population_size},
              {"de_generations", c.selection_de.generations},
              {"de_weight", c.selection_de.differential_weight},
              {"de_crossover", c.selection_de.crossover_rate},
              {"de_init_scan", c.selection_de.init_scan},
              {"fit_population", c.fit.de.population_size},
              {"fit_generations", c.fit.de.generations},
              {"fit_restarts", c.fit.restarts},
              {"nugget", c.fit.nugget},
              {"audit_probes", c.audit_probes}};
}

Json to_json(const RunRecord& r, bool include_timings) {
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back(Json{{"n_evals", t.n_evals}, {"nrmse", t.nrmse}});
  Json iters = Json::array();
  for (const auto& it : r.iterations) {
    Json pts = Json::array();
    for (const auto& p : it.points) pts.push_back(vec_json(p));
    Json ji{{"points", pts}, {"levels", it.levels}, {"criterion_values", it.criterion_values},
            {"n_evals", it.n_evals}, {"nrmse", it.nrmse}};
    if (it.audit_passed) ji["audit_passed"] = *it.audit_passed;
    if (include_timings) ji["seconds"] = it.seconds;
    iters.push_back(std::move(ji));
  }
  Json j{{"function", r.function}, {"criterion", r.criterion}, {"mode", r.mode}, {"rep", r.rep}, {"seed", r.seed},
         {"q", r.q}, {"evaluations", r.evaluations}, {"high_evaluations", r.high_evaluations},
         {"low_evaluations", r.low_evaluations}, {"trace", trace}, {"iterations", iters},
         {"final_design", to_json(r.final_design)}};
  if (r.final_low_design) j["final_low_design"] = to_json(*r.final_low_design);
  return j;
}

Json to_json(const Aggregate& a) {
  return Json{{"n_evals", a.n_evals}, {"median_nrmse", a.median_nrmse}, {"discrepancy", a.discrepancy}};
}

namespace {

BoxDomain domain_from_json_impl(const Json& j) {
  BoxDomain d{j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>()};
  d.validate();
  return d;
}

Design design_from_json_impl(const Json& j) {
  Design d;
  d.domain = domain_from_json_impl(j.at("domain"));
  const Json& pts = j.at("points");
  d.points = Matrix(static_cast<Eigen::Index>(pts.size()), d.domain.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(pts[i].size()) != d.domain.dim()) {
      throw Error(ErrorCode::InvalidDesign, "design JSON: point has wrong dimension");
    }
    d.points.row(static_cast<Eigen::Index>(i)) = vec_from(pts[i]).transpose();
  }
  d.outputs = vec_from(j.at("outputs"));
  d.validate(1);
  return d;
}

KernelParams params_from_json_impl(const Json& j) {
  KernelParams p{vec_from(j.at("lengthscales")), j.at("process_variance").get<double>(), j.at("nugget").get<double>()};
  p.validate();
  return p;
}

GpModel gp_model_from_json_impl(const Json& j) {
  return condition(design_from_json_impl(j.at("design")), params_from_json_impl(j.at("params")));
}

HkModel hk_model_from_json_impl(const Json& j) {
  return condition_hk(gp_model_from_json_impl(j.at("low_model")), design_from_json_impl(j.at("high_design")),
                      params_from_json_impl(j.at("params")));
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parameter, std::string(what) + " JSON: " + e.what());
  }
}

}  // namespace

BoxDomain domain_from_json(const Json& j) { return guarded("domain", [&] { return domain_from_json_impl(j); }); }
Design design_from_json(const Json& j) { return guarded("design", [&] { return design_from_json_impl(j); }); }
KernelParams params_from_json(const Json& j) { return guarded("params", [&] { return params_from_json_impl(j); }); }
GpModel gp_model_from_json(const Json& j) { return guarded("model", [&] { return gp_model_from_json_impl(j); }); }
HkModel hk_model_from_json(const Json& j) { return guarded("model", [&] { return hk_model_from_json_impl(j); }); }

ExperimentConfig config_from_json(const Json& j, ExperimentConfig c) {
  try {
    read_opt(j, "function", c.function);
    if (j.contains("criterion")) c.criterion = parse_criterion(j.at("criterion").get<std::string>());
    read_opt(j, "init_mult", c.init_mult);
    read_opt(j, "budget_mult", c.budget_mult);
    read_opt(j, "n_init", c.n_init);
    read_opt(j, "budget", c.budget);
    read_opt(j, "q", c.q);
    read_opt(j, "reps", c.repetitions);
    read_opt(j, "seed", c.seed);
    read_opt(j, "refit_every", c.refit_every);
    read_opt(j, "low_init_mult", c.low_init_mult);
    read_opt(j, "mf_budget_mult", c.mf_budget_mult);
    read_opt(j, "n_init_low", c.n_init_low);
    read_opt(j, "test_size", c.test_size);
    read_opt(j, "lhs_sweeps", c.lhs_sweeps);
    read_opt(j, "de_population", c.selection_de.population_size);
    read_opt(j, "de_generations", c.selection_de.generations);
    read_opt(j, "de_weight", c.selection_de.differential_weight);
    read_opt(j, "de_crossover", c.selection_de.crossover_rate);
    read_opt(j, "de_init_scan", c.selection_de.init_scan);
    read_opt(j, "fit_population", c.fit.de.population_size);
    read_opt(j, "fit_generations", c.fit.de.generations);
    read_opt(j, "fit_restarts", c.fit.restarts);
    read_opt(j, "nugget", c.fit.nugget);
    read_opt(j, "audit_probes", c.audit_probes);
    read_opt(j, "threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parameter, std::string("config JSON: ") + e.what());
  }
  return c;
}

Json results_document(const ExperimentConfig& config, const std::vector<RunRecord>& records, bool include_timings) {
  Json records_json = Json::array();
  for (const auto& r : records) records_json.push_back(to_json(r, include_timings));
  return Json{{"config", to_json(config)}, {"records", records_json}, {"aggregate", to_json(aggregate(records))}};
}

void write_results(const std::string& json_path, const std::string& csv_path, const ExperimentConfig& config,
                   const std::vector<RunRecord>& records, bool include_timings) {
  std::ofstream out(json_path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + json_path);
  out << results_document(config, records, include_timings).dump(1) << "\n";

  std::ofstream csv(csv_path);
  if (!csv) throw Error(ErrorCode::Io, "cannot write " + csv_path);
  csv << "rep,n_evals,nrmse\n" << std::setprecision(17);
  for (const auto& r : records) {
    for (const auto& t : r.trace) csv << r.rep << "," << t.n_evals << "," << t.nrmse << "\n";
  }
  if (!out || !csv) throw Error(ErrorCode::Io, "write failed for " + json_path);
}

}  // namespace vigf
