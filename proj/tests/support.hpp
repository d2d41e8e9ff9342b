#pragma once

// Small shared helpers for the unit tests: canonical parameter sets and a
// relative-difference metric used when comparing complex ratios.

#include <algorithm>
#include <cmath>
#include <complex>

#include <kpx/model.hpp>

namespace kpxtest {

inline kpx::ModelParams barrier(double a = 1.0, double b = 1.0, double V = 10.0,
                                double m1 = 1.0, double m2 = 1.0) {
  return kpx::ModelParams{kpx::ModelKind::Barrier, a, b, V, m1, m2};
}

inline kpx::ModelParams well(double a = 1.0, double b = 1.0, double V = 3.0,
                             double m1 = 1.0, double m2 = 1.0) {
  return kpx::ModelParams{kpx::ModelKind::Well, a, b, V, m1, m2};
}

inline double rel_diff(kpx::Cmplx lhs, kpx::Cmplx rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace kpxtest
