#pragma once

#include "vigf/common.hpp"

#include <array>
#include <string>
#include <string_view>

namespace vigf {

enum class BenchmarkId {
  F1, F2, F3, F4, F5, F6, F7, F8, F9, F10, F11,
  F4L, F9L, F10L, F11L,
  TwoGaussians,
};

using RawFunction = double (*)(const VectorRef&);

struct BenchmarkFn {
  BenchmarkId id;
  std::string key;    // "f1", "f4l", ...
  std::string name;
  int dim;
  BoxDomain domain;   // physical ranges; the unit cube for most functions
  std::string scale;  // "Small" / "Medium", empty for functions outside that table
  RawFunction raw;    // evaluates at a physical-domain point

  /// Evaluates at a unit-cube point (affinely mapped onto `domain`).
  /// Throws Error(Domain) outside [0,1]^d.
  double operator()(const VectorRef& unit_x) const;
};

const BenchmarkFn& benchmark(BenchmarkId id);
/// Case-insensitive key lookup ("f2", "F10L", "gauss2"). Throws Error(Usage).
const BenchmarkFn& benchmark(std::string_view key);
const std::vector<BenchmarkId>& all_benchmarks();

inline double evaluate(const BenchmarkFn& fn, const VectorRef& unit_x) { return fn(unit_x); }

struct HartmannConstants {
  std::array<double, 4> alpha;
  std::array<std::array<double, 3>, 4> a;
  std::array<std::array<double, 3>, 4> p;
};

const HartmannConstants& hartmann_constants();

struct FidelityPair {
  const BenchmarkFn& high;
  const BenchmarkFn& low;
};

bool has_fidelity_pair(BenchmarkId id);
/// (f4, f4l), (f9, f9l), (f10, f10l), (f11, f11l); other ids raise Error(Usage).
FidelityPair fidelity_pair(BenchmarkId id);

}  // namespace vigf
