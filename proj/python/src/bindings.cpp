#include "vigf/benchfns.hpp"
#include "vigf/criteria.hpp"
#include "vigf/design_metrics.hpp"
#include "vigf/gp.hpp"
#include "vigf/hk.hpp"
#include "vigf/runner.hpp"
#include "vigf/serialize.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace vigf;

namespace {

BoxDomain make_domain(int dim, const std::optional<std::vector<double>>& lower,
                      const std::optional<std::vector<double>>& upper) {
  if (!lower && !upper) return BoxDomain::unit(dim);
  if (!lower || !upper) throw Error(ErrorCode::Parameter, "lower and upper must be given together");
  BoxDomain domain{*lower, *upper};
  domain.validate();
  if (domain.dim() != dim) throw Error(ErrorCode::Parameter, "domain dimension does not match the design");
  return domain;
}

Design make_design(const Matrix& x, const Vector& y, const std::optional<std::vector<double>>& lower,
                   const std::optional<std::vector<double>>& upper) {
  return Design{make_domain(static_cast<int>(x.cols()), lower, upper), x, y};
}

FitConfig make_fit_config(std::uint64_t seed, int restarts, int generations) {
  FitConfig config;
  config.de.seed = seed;
  config.restarts = restarts;
  config.de.generations = generations;
  return config;
}

DeConfig make_de(std::uint64_t seed, int population, int generations, int init_scan) {
  return DeConfig{.population_size = population, .generations = generations, .seed = seed, .init_scan = init_scan};
}

FidelityLevel parse_level(const std::string& level) {
  if (level == "low") return FidelityLevel::Low;
  if (level == "high") return FidelityLevel::High;
  throw Error(ErrorCode::Usage, "level must be 'low' or 'high'");
}

std::string level_name(FidelityLevel level) { return level == FidelityLevel::Low ? "low" : "high"; }

std::string run_json(const std::string& mode, const std::string& config_text) {
  Json parsed;
  try {
    parsed = Json::parse(config_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parameter, std::string("config JSON: ") + e.what());
  }
  ExperimentConfig config = config_from_json(parsed);
  std::vector<RunRecord> records;
  if (mode == "sequential") {
    records = run_sequential(config);
  } else if (mode == "batch") {
    records = run_batch(config);
  } else if (mode == "multifidelity") {
    records = run_multifidelity(config);
  } else if (mode == "lhs") {
    records = run_lhs_baseline(config);
  } else {
    throw Error(ErrorCode::Usage, "unknown mode '" + mode + "'");
  }
  return results_document(config, records).dump();
}

}  // namespace

PYBIND11_MODULE(_vigf, m) {
  m.doc() = "Kriging surrogates, adaptive design criteria and benchmark runners";

  static py::handle error_type = py::exception<Error>(m, "VigfError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(std::string(error_code_name(e.code())) + ": " + e.what());
      exc.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<GpModel>(m, "GpModel")
      .def_property_readonly("points", [](const GpModel& g) { return g.design().points; })
      .def_property_readonly("outputs", [](const GpModel& g) { return g.design().outputs; })
      .def_property_readonly("lengthscales", [](const GpModel& g) { return g.params().lengthscales; })
      .def_property_readonly("process_variance", [](const GpModel& g) { return g.params().process_variance; })
      .def_property_readonly("nugget_ratio", &GpModel::nugget_ratio)
      .def_property_readonly("mu_hat", &GpModel::mu_hat)
      .def_property_readonly("log_likelihood", &GpModel::log_likelihood)
      .def_property_readonly("dim", &GpModel::dim)
      .def("mean", [](const GpModel& g, const Vector& x) { return g.mean(x); }, py::arg("x"))
      .def("var", [](const GpModel& g, const Vector& x) { return g.var(x); }, py::arg("x"))
      .def("cov", [](const GpModel& g, const Vector& a, const Vector& b) { return g.cov(a, b); }, py::arg("x"),
           py::arg("x2"))
      .def(
          "update",
          [](const GpModel& g, const Vector& x, double y, bool refit, std::uint64_t seed) {
            return update(g, x, y, refit, make_fit_config(seed, 2, 50));
          },
          py::arg("x"), py::arg("y"), py::arg("refit") = true, py::arg("seed") = 0)
      .def("to_json", [](const GpModel& g) { return to_json(g).dump(); });

  py::class_<HkModel>(m, "HkModel")
      .def_property_readonly("low_model", &HkModel::low_model)
      .def_property_readonly("beta_hat", &HkModel::beta_hat)
      .def_property_readonly("lengthscales", [](const HkModel& h) { return h.params().lengthscales; })
      .def_property_readonly("process_variance", [](const HkModel& h) { return h.params().process_variance; })
      .def_property_readonly("dim", &HkModel::dim)
      .def("mean", [](const HkModel& h, const Vector& x) { return h.mean(x); }, py::arg("x"))
      .def("var", [](const HkModel& h, const Vector& x) { return h.var(x); }, py::arg("x"))
      .def(
          "var_level",
          [](const HkModel& h, const Vector& x, const std::string& level) {
            return h.var_level(x, parse_level(level));
          },
          py::arg("x"), py::arg("level"))
      .def(
          "add_low",
          [](const HkModel& h, const Vector& x, double y, std::uint64_t seed) {
            return add_low_observation(h, x, y, make_fit_config(seed, 2, 50));
          },
          py::arg("x"), py::arg("y"), py::arg("seed") = 0)
      .def(
          "add_high",
          [](const HkModel& h, const Vector& x, double y, std::uint64_t seed) {
            return add_high_observation(h, x, y, make_fit_config(seed, 2, 50));
          },
          py::arg("x"), py::arg("y"), py::arg("seed") = 0)
      .def("to_json", [](const HkModel& h) { return to_json(h).dump(); });

  m.def(
      "fit",
      [](const Matrix& x, const Vector& y, std::optional<std::vector<double>> lower,
         std::optional<std::vector<double>> upper, std::uint64_t seed, int restarts, int generations) {
        return fit(make_design(x, y, lower, upper), make_fit_config(seed, restarts, generations));
      },
      py::arg("x"), py::arg("y"), py::arg("lower") = py::none(), py::arg("upper") = py::none(), py::arg("seed") = 0,
      py::arg("restarts") = 2, py::arg("generations") = 50,
      "Maximum-likelihood ordinary kriging fit on rows of x.");

  m.def(
      "condition",
      [](const Matrix& x, const Vector& y, const Vector& lengthscales, double process_variance, double nugget,
         std::optional<std::vector<double>> lower, std::optional<std::vector<double>> upper) {
        return condition(make_design(x, y, lower, upper), KernelParams{lengthscales, process_variance, nugget});
      },
      py::arg("x"), py::arg("y"), py::arg("lengthscales"), py::arg("process_variance") = 1.0,
      py::arg("nugget") = 0.0, py::arg("lower") = py::none(), py::arg("upper") = py::none(),
      "Kriging posterior with fixed kernel parameters.");

  m.def(
      "fit_hk",
      [](const GpModel& low, const Matrix& x, const Vector& y, std::uint64_t seed) {
        Design high{low.design().domain, x, y};
        return fit_hk(low, high, make_fit_config(seed, 2, 50));
      },
      py::arg("low_model"), py::arg("x"), py::arg("y"), py::arg("seed") = 0,
      "Hierarchical kriging on high-fidelity rows with the low model as trend.");

  m.def(
      "criterion",
      [](const GpModel& g, const Vector& x, const std::string& kind) {
        return criterion(g, x, parse_criterion(kind));
      },
      py::arg("model"), py::arg("x"), py::arg("kind") = "vigf");

  m.def(
      "criterion_hk",
      [](const HkModel& h, const Vector& x, const std::string& level, const std::string& kind) {
        return criterion_hk(h, x, parse_level(level), parse_criterion(kind));
      },
      py::arg("model"), py::arg("x"), py::arg("level"), py::arg("kind") = "vigf_hk");

  m.def(
      "select_next",
      [](const GpModel& g, const std::string& kind, std::uint64_t seed, int population, int generations,
         int init_scan) {
        Selection s = select_next(g, parse_criterion(kind), make_de(seed, population, generations, init_scan));
        return py::make_tuple(s.x, s.value);
      },
      py::arg("model"), py::arg("kind") = "vigf", py::arg("seed") = 0, py::arg("population") = 0,
      py::arg("generations") = 200, py::arg("init_scan") = 20, "Returns (x, criterion value).");

  m.def(
      "select_batch",
      [](const GpModel& g, int q, std::uint64_t seed, int population, int generations, int init_scan) {
        std::vector<Vector> xs;
        for (const Selection& s : select_batch(g, q, make_de(seed, population, generations, init_scan)))
          xs.push_back(s.x);
        return xs;
      },
      py::arg("model"), py::arg("q"), py::arg("seed") = 0, py::arg("population") = 0, py::arg("generations") = 200,
      py::arg("init_scan") = 20);

  m.def(
      "select_next_hk",
      [](const HkModel& h, const std::string& kind, std::uint64_t seed, int population, int generations,
         int init_scan) {
        HkSelection s = select_next_hk(h, parse_criterion(kind), make_de(seed, population, generations, init_scan));
        return py::make_tuple(s.x, level_name(s.level), s.value);
      },
      py::arg("model"), py::arg("kind") = "vigf_hk", py::arg("seed") = 0, py::arg("population") = 0,
      py::arg("generations") = 200, py::arg("init_scan") = 20, "Returns (x, 'low' | 'high', criterion value).");

  m.def(
      "list_functions",
      [] {
        std::vector<py::dict> out;
        for (BenchmarkId id : all_benchmarks()) {
          const BenchmarkFn& fn = benchmark(id);
          py::dict d;
          d["key"] = fn.key;
          d["name"] = fn.name;
          d["dim"] = fn.dim;
          d["scale"] = fn.scale;
          d["lower"] = fn.domain.lower;
          d["upper"] = fn.domain.upper;
          out.push_back(d);
        }
        return out;
      },
      "Benchmark catalogue.");

  m.def(
      "evaluate", [](const std::string& key, const Vector& unit_x) { return benchmark(key)(unit_x); },
      py::arg("key"), py::arg("x"), "Benchmark value at a point of the unit cube.");

  m.def("lhs_random", &lhs_random, py::arg("n"), py::arg("d"), py::arg("seed") = 0);
  m.def("lhs_maximin", &lhs_maximin, py::arg("n"), py::arg("d"), py::arg("seed") = 0, py::arg("sweeps") = 10000);
  m.def("discrepancy_l2", &discrepancy_l2, py::arg("points"));

  m.def(
      "nrmse",
      [](const Vector& predicted, const Vector& actual) {
        if (predicted.size() != actual.size())
          throw Error(ErrorCode::Parameter, "predicted and actual differ in length");
        TestSet test{Matrix(actual.size(), 1), actual};
        for (Eigen::Index i = 0; i < actual.size(); ++i) test.points(i, 0) = static_cast<double>(i);
        return nrmse([&](const Vector& idx) { return predicted[static_cast<Eigen::Index>(idx[0])]; }, test);
      },
      py::arg("predicted"), py::arg("actual"));

  m.def("_run_json", &run_json, py::arg("mode"), py::arg("config_json"),
        py::call_guard<py::gil_scoped_release>());
}
