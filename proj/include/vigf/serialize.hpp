#pragma once

#include "vigf/gp.hpp"
#include "vigf/hk.hpp"
#include "vigf/runner.hpp"

#include "json.hpp"

namespace vigf {

using Json = nlohmann::json;

Json to_json(const BoxDomain& domain);
Json to_json(const Design& design);
Json to_json(const KernelParams& params);
/// {design, params, mu_hat}; restored by re-conditioning with the stored params.
Json to_json(const GpModel& model);
/// {low_model, high_design, params, beta_hat}.
Json to_json(const HkModel& model);
Json to_json(const ExperimentConfig& config);
/// Timings are wall-clock dependent; leave them out for reproducible files.
Json to_json(const RunRecord& record, bool include_timings = false);
Json to_json(const Aggregate& aggregate);

BoxDomain domain_from_json(const Json& j);
Design design_from_json(const Json& j);
KernelParams params_from_json(const Json& j);
GpModel gp_model_from_json(const Json& j);
HkModel hk_model_from_json(const Json& j);
/// Fields absent from `j` keep the values already in `base`.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});

/// {config, records, aggregate}.
Json results_document(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                      bool include_timings = false);

/// Writes the results document (indent 1) and a flat CSV with columns rep,n_evals,nrmse.
void write_results(const std::string& json_path, const std::string& csv_path, const ExperimentConfig& config,
                   const std::vector<RunRecord>& records, bool include_timings = false);

}  // namespace vigf
