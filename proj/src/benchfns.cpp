#include "vigf/benchfns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace vigf {

namespace {

using std::exp;
using std::sin;
using std::sqrt;
constexpr double kPi = std::numbers::pi;

double franke(const VectorRef& x) {
  const double a = 9.0 * x[0];
  const double b = 9.0 * x[1];
  // Second term uses (9 x2 + 1) / 10 without a square, as tabulated.
  return 0.75 * exp(-(a - 2) * (a - 2) / 4 - (b - 2) * (b - 2) / 4) +
         0.75 * exp(-(a + 1) * (a + 1) / 49 - (b + 1) / 10) +
         0.5 * exp(-(a - 7) * (a - 7) / 4 - (b - 3) * (b - 3) / 4) -
         0.2 * exp(-(a - 4) * (a - 4) - (b - 7) * (b - 7));
}

double dette_curved(const VectorRef& x) {
  const double t = x[0] - 2 + 8 * x[1] - 8 * x[1] * x[1];
  const double u = 3 - 4 * x[1];
  const double v = 2 * x[2] - 1;
  return 4 * t * t + u * u + 16 * sqrt(x[2] + 1) * v * v;
}

double hartmann3(const VectorRef& x) {
  const auto& c = hartmann_constants();
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 3; ++j) inner += c.a[i][j] * (x[j] - c.p[i][j]) * (x[j] - c.p[i][j]);
    s += c.alpha[i] * exp(-inner);
  }
  return -s;
}

double park(const VectorRef& x) {
  // x1/2 (sqrt(1 + c / x1^2) - 1) rewritten as (sqrt(x1^2 + c) - x1) / 2, which
  // is identical for x1 > 0 and stays finite on the x1 = 0 face.
  const double c = (x[1] + x[2] * x[2]) * x[3];
  return 0.5 * (sqrt(x[0] * x[0] + c) - x[0]) + (x[0] + 3 * x[3]) * exp(1 + sin(x[2]));
}

double park_low(const VectorRef& x) {
  return (1 + sin(x[0]) / 10) * park(x) - 2 * x[0] + x[1] * x[1] + x[2] * x[2] + 0.5;
}

double friedman(const VectorRef& x) {
  return 10 * sin(kPi * x[0] * x[1]) + 20 * (x[2] - 0.5) * (x[2] - 0.5) + 10 * x[3] + 5 * x[4];
}

double gramacy_lee(const VectorRef& x) {
  return exp(sin(std::pow(0.9 * (x[0] + 0.48), 10))) + x[1] * x[2] + x[3];
}

double otl_circuit(const VectorRef& x) {
  const double vb = 12 * x[1] / (x[0] + x[1]);
  const double b = x[5] * (x[4] + 9);
  const double den = b + x[2];
  return (vb + 0.74) * b / den + 11.35 * x[2] / den + 0.74 * x[2] * b / (den * x[3]);
}

double piston(const VectorRef& x) {
  const double a = x[4] * x[1] + 19.62 * x[0] - x[3] * x[2] / x[1];
  const double v = x[1] / (2 * x[3]) * (sqrt(a * a + 4 * x[3] * x[4] * x[2] / x[6] * x[5]) - a);
  return 2 * kPi * sqrt(x[0] / (x[3] + x[1] * x[1] * x[4] * x[2] * x[5] / (x[6] * v * v)));
}

double currin(double x1, double x2) {
  const double e = x2 > 0.0 ? exp(-1.0 / (2.0 * x2)) : 0.0;
  const double num = 2300 * x1 * x1 * x1 + 1900 * x1 * x1 + 2092 * x1 + 60;
  const double den = 100 * x1 * x1 * x1 + 500 * x1 * x1 + 4 * x1 + 20;
  return (1 - e) * num / den;
}

double currin_high(const VectorRef& x) { return currin(x[0], x[1]); }

double currin_low(const VectorRef& x) {
  const double h = 0.05;
  const double lo = std::max(0.0, x[1] - h);
  return 0.25 * (currin(x[0] + h, x[1] + h) + currin(x[0] + h, lo)) +
         0.25 * (currin(x[0] - h, x[1] + h) + currin(x[0] - h, lo));
}

double f10_high(const VectorRef& x) { return 2.0 / 3.0 * exp(x[0] + x[1]) - x[3] * sin(x[2]) + x[2]; }

double f10_low(const VectorRef& x) { return 1.2 * f10_high(x) - 1; }

double borehole(const VectorRef& x) {
  const double lg = std::log(x[3] / x[4]);
  return 2 * kPi * x[0] * (x[1] - x[2]) /
         (lg * (1 + 2 * x[5] * x[0] / (lg * x[4] * x[4] * x[6]) + x[0] / x[7]));
}

double borehole_low(const VectorRef& x) {
  const double lg = std::log(x[3] / x[4]);
  return 5 * x[0] * (x[1] - x[2]) / (lg * (1.5 + 2 * x[5] * x[0] / (lg * x[4] * x[4] * x[6]) + x[0] / x[7]));
}

// Sharp bump at (1/3, 1/3) plus a broad one at (3/4, 3/4).
double two_gaussians(const VectorRef& x) {
  const double a0 = x[0] - 1.0 / 3.0, a1 = x[1] - 1.0 / 3.0;
  const double b0 = x[0] - 0.75, b1 = x[1] - 0.75;
  return exp(-(a0 * a0 + a1 * a1) / (2 * 0.08 * 0.08)) + 0.6 * exp(-(b0 * b0 + b1 * b1) / (2 * 0.2 * 0.2));
}

BoxDomain box(std::vector<double> lo, std::vector<double> hi) { return BoxDomain{std::move(lo), std::move(hi)}; }

const BoxDomain& otl_domain() {
  static const BoxDomain d = box({50, 25, 0.5, 1.2, 0.25, 50}, {150, 70, 3, 2.5, 1.2, 300});
  return d;
}

const BoxDomain& piston_domain() {
  static const BoxDomain d = box({30, 0.005, 0.002, 1000, 90000, 290, 340}, {60, 0.020, 0.010, 5000, 110000, 296, 360});
  return d;
}

const BoxDomain& borehole_domain() {
  static const BoxDomain d =
      box({63070, 990, 700, 100, 0.05, 1120, 9855, 63.1}, {115600, 1110, 820, 50000, 0.15, 1680, 12045, 116});
  return d;
}

std::vector<BenchmarkFn> make_table() {
  auto unit = [](int d) { return BoxDomain::unit(d); };
  return {
      {BenchmarkId::F1, "f1", "Franke", 2, unit(2), "Small", franke},
      {BenchmarkId::F2, "f2", "Dette & Pepelyshev (curved)", 3, unit(3), "Small", dette_curved},
      {BenchmarkId::F3, "f3", "Hartmann", 3, unit(3), "Small", hartmann3},
      {BenchmarkId::F4, "f4", "Park", 4, unit(4), "Small", park},
      {BenchmarkId::F5, "f5", "Friedman", 5, unit(5), "Medium", friedman},
      {BenchmarkId::F6, "f6", "Gramacy & Lee", 6, unit(6), "Medium", gramacy_lee},
      {BenchmarkId::F7, "f7", "OTL circuit", 6, otl_domain(), "Medium", otl_circuit},
      {BenchmarkId::F8, "f8", "Piston simulation", 7, piston_domain(), "Medium", piston},
      {BenchmarkId::F9, "f9", "Currin", 2, unit(2), "Small", currin_high},
      {BenchmarkId::F10, "f10", "Two-fidelity test function f10", 4, unit(4), "Small", f10_high},
      {BenchmarkId::F11, "f11", "Borehole", 8, borehole_domain(), "Medium", borehole},
      {BenchmarkId::F4L, "f4l", "Park (low fidelity)", 4, unit(4), "Small", park_low},
      {BenchmarkId::F9L, "f9l", "Currin (low fidelity)", 2, unit(2), "Small", currin_low},
      {BenchmarkId::F10L, "f10l", "f10 (low fidelity)", 4, unit(4), "Small", f10_low},
      {BenchmarkId::F11L, "f11l", "Borehole (low fidelity)", 8, borehole_domain(), "Medium", borehole_low},
      {BenchmarkId::TwoGaussians, "gauss2", "Two Gaussian bumps", 2, unit(2), "", two_gaussians},
  };
}

const std::vector<BenchmarkFn>& table() {
  static const std::vector<BenchmarkFn> t = make_table();
  return t;
}

}  // namespace

double BenchmarkFn::operator()(const VectorRef& unit_x) const {
  if (unit_x.size() != dim) {
    throw Error(ErrorCode::Domain, key + ": expected " + std::to_string(dim) + " inputs");
  }
  for (int j = 0; j < dim; ++j) {
    if (!(unit_x[j] >= 0.0 && unit_x[j] <= 1.0)) throw Error(ErrorCode::Domain, key + ": input outside the unit cube");
  }
  return raw(domain.from_unit(unit_x));
}

const BenchmarkFn& benchmark(BenchmarkId id) { return table()[static_cast<std::size_t>(id)]; }

const BenchmarkFn& benchmark(std::string_view key) {
  std::string k(key);
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& fn : table()) {
    if (fn.key == k) return fn;
  }
  throw Error(ErrorCode::Usage, "unknown benchmark function '" + std::string(key) + "'");
}

const std::vector<BenchmarkId>& all_benchmarks() {
  static const std::vector<BenchmarkId> ids = [] {
    std::vector<BenchmarkId> v;
    for (const auto& fn : table()) v.push_back(fn.id);
    return v;
  }();
  return ids;
}

const HartmannConstants& hartmann_constants() {
  static const HartmannConstants c{
      {1.0, 1.2, 3.0, 3.2},
      {{{3, 10, 30}, {0.1, 10, 35}, {3, 10, 30}, {0.1, 10, 35}}},
      {{{0.3689, 0.1170, 0.2673}, {0.4699, 0.4387, 0.7470}, {0.1091, 0.8732, 0.5547}, {0.0381, 0.5743, 0.8828}}},
  };
  return c;
}

bool has_fidelity_pair(BenchmarkId id) {
  return id == BenchmarkId::F4 || id == BenchmarkId::F9 || id == BenchmarkId::F10 || id == BenchmarkId::F11;
}

FidelityPair fidelity_pair(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::F4: return {benchmark(BenchmarkId::F4), benchmark(BenchmarkId::F4L)};
    case BenchmarkId::F9: return {benchmark(BenchmarkId::F9), benchmark(BenchmarkId::F9L)};
    case BenchmarkId::F10: return {benchmark(BenchmarkId::F10), benchmark(BenchmarkId::F10L)};
    case BenchmarkId::F11: return {benchmark(BenchmarkId::F11), benchmark(BenchmarkId::F11L)};
    default: throw Error(ErrorCode::Usage, benchmark(id).key + " has no low-fidelity counterpart");
  }
}

}  // namespace vigf
