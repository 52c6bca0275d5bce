#include "vigf/criteria.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace vigf {

std::string_view criterion_name(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Vigf: return "vigf";
    case CriterionKind::Eigf: return "eigf";
    case CriterionKind::Mse: return "mse";
    case CriterionKind::VigfHk: return "vigf_hk";
    case CriterionKind::EigfHk: return "eigf_hk";
    case CriterionKind::MseHk: return "mse_hk";
  }
  return "?";
}

CriterionKind parse_criterion(std::string_view name) {
  for (auto k : {CriterionKind::Vigf, CriterionKind::Eigf, CriterionKind::Mse, CriterionKind::VigfHk,
                 CriterionKind::EigfHk, CriterionKind::MseHk}) {
    if (criterion_name(k) == name) return k;
  }
  throw Error(ErrorCode::Usage, "unknown criterion '" + std::string(name) + "'");
}

bool is_hk(CriterionKind kind) {
  return kind == CriterionKind::VigfHk || kind == CriterionKind::EigfHk || kind == CriterionKind::MseHk;
}

NearestOutput nearest_design_output(const VectorRef& x, const Design& design) {
  if (design.size() == 0) throw Error(ErrorCode::InvalidDesign, "nearest_design_output: empty design");
  NearestOutput best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < design.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < design.dim(); ++j) {
      const double h = (x[j] - design.points(i, j)) / design.domain.width(j);
      s += h * h;
    }
    if (s < best_d) {
      best_d = s;
      best.index = i;
    }
  }
  best.value = design.outputs[best.index];
  return best;
}

ImprovementStats improvement_stats(const GpModel& model, const VectorRef& x) {
  const NearestOutput near = nearest_design_output(x, model.design());
  ImprovementStats s;
  s.nearest_index = near.index;
  s.bias = model.mean(x) - near.value;
  s.variance = model.var(x);
  s.lambda = s.variance > 0.0 ? s.bias * s.bias / s.variance : 0.0;
  return s;
}

double vigf(const GpModel& model, const VectorRef& x) {
  const auto s = improvement_stats(model, x);
  return vigf_value(s.bias, s.variance);
}

double eigf(const GpModel& model, const VectorRef& x) {
  const auto s = improvement_stats(model, x);
  return eigf_value(s.bias, s.variance);
}

double mse_criterion(const GpModel& model, const VectorRef& x) { return model.var(x); }

// Posterior variances at or below this fraction of sigma^2 count as zero
// (design rows, up to rounding).
constexpr double kVanishingVariance = 1e-10;

double repulsion(const GpModel& model, const VectorRef& x, const VectorRef& x_u) {
  const double vx = model.var(x);
  const double vu = model.var(x_u);
  const double floor = kVanishingVariance * model.params().process_variance;
  if (vx <= floor || vu <= floor) return 0.0;
  const double denom = std::sqrt(vx * vu);
  const double corr = std::clamp(model.cov(x, x_u) / denom, -1.0, 1.0);
  return 1.0 - corr;
}

double pvigf(const GpModel& model, const VectorRef& x, std::span<const Vector> chosen) {
  double v = vigf(model, x);
  for (const auto& u : chosen) {
    if (v == 0.0) break;
    v *= repulsion(model, x, u);
  }
  return v;
}

double criterion(const GpModel& model, const VectorRef& x, CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Vigf: return vigf(model, x);
    case CriterionKind::Eigf: return eigf(model, x);
    case CriterionKind::Mse: return mse_criterion(model, x);
    default:
      throw Error(ErrorCode::Usage, std::string(criterion_name(kind)) + " needs a hierarchical kriging model");
  }
}

double criterion_hk(const HkModel& model, const VectorRef& x, FidelityLevel level, CriterionKind kind) {
  if (!is_hk(kind)) {
    throw Error(ErrorCode::Usage, std::string(criterion_name(kind)) + " is not a two-fidelity criterion");
  }
  const double s2 = model.var_level(x, level);
  if (kind == CriterionKind::MseHk) return s2;
  const double bias = model.mean(x) - nearest_design_output(x, model.high_design()).value;
  return kind == CriterionKind::VigfHk ? vigf_value(bias, s2) : eigf_value(bias, s2);
}

Selection select_next(const GpModel& model, CriterionKind kind, const DeConfig& de) {
  auto obj = [&](const Vector& x) { return criterion(model, x, kind); };
  const DeResult r = de_maximize(obj, model.design().domain, de);
  return {r.x, r.value};
}

std::vector<Selection> select_batch(const GpModel& model, int q, const DeConfig& de) {
  if (q < 2) throw Error(ErrorCode::Parameter, "select_batch needs q >= 2");
  const Design& design = model.design();
  std::vector<Selection> out;
  std::vector<Vector> chosen;
  for (int j = 0; j < q; ++j) {
    auto obj = [&](const Vector& x) { return pvigf(model, x, chosen); };
    bool placed = false;
    for (int attempt = 0; attempt < 2 && !placed; ++attempt) {
      DeConfig cfg = de;
      cfg.seed = mix_seed(de.seed, static_cast<std::uint64_t>(j * 2 + attempt));
      const DeResult r = de_maximize(obj, design.domain, cfg);
      bool dup = design.min_unit_distance(r.x) <= kDuplicateThreshold;
      for (const auto& c : chosen) {
        if ((design.domain.to_unit(r.x) - design.domain.to_unit(c)).norm() <= kDuplicateThreshold) dup = true;
      }
      if (!dup) {
        chosen.push_back(r.x);
        out.push_back({r.x, r.value});
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorCode::DuplicatePoint, "batch selection kept returning an existing point");
  }
  return out;
}

HkSelection select_next_hk(const HkModel& model, CriterionKind kind, const DeConfig& de) {
  HkSelection sel;
  DeResult best[2];
  for (int k = 0; k < 2; ++k) {
    const FidelityLevel level = k == 0 ? FidelityLevel::Low : FidelityLevel::High;
    DeConfig cfg = de;
    cfg.seed = mix_seed(de.seed, static_cast<std::uint64_t>(k));
    auto obj = [&](const Vector& x) { return criterion_hk(model, x, level, kind); };
    best[k] = de_maximize(obj, model.high_design().domain, cfg);
  }
  sel.value_low = best[0].value;
  sel.value_high = best[1].value;
  const int k = sel.value_low >= sel.value_high ? 0 : 1;
  sel.x = best[k].x;
  sel.value = best[k].value;
  sel.level = k == 0 ? FidelityLevel::Low : FidelityLevel::High;
  return sel;
}

void write_surface_csv(std::ostream& out, const Objective& objective, const BoxDomain& domain, int points_per_dim) {
  if (points_per_dim < 2) throw Error(ErrorCode::Parameter, "surface grid needs at least 2 points per axis");
  const int d = domain.dim();
  for (int j = 0; j < d; ++j) out << "x_" << (j + 1) << ",";
  out << "value\n";
  out.precision(17);
  std::vector<int> idx(d, 0);
  Vector x(d);
  for (;;) {
    for (int j = 0; j < d; ++j) {
      x[j] = domain.lower[j] + domain.width(j) * idx[j] / (points_per_dim - 1);
      out << x[j] << ",";
    }
    out << objective(x) << "\n";
    int j = 0;
    while (j < d && ++idx[j] == points_per_dim) idx[j++] = 0;
    if (j == d) break;
  }
}

}  // namespace vigf
