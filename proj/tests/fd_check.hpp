#pragma once

// Finite-difference probe of an assembled Bloch state shared by the unit
// tests and the acceptance runner.  The second derivative of psi is taken
// numerically at the midpoint of each region slab and inserted into the
// stationary equation -psi''/(2m) + (V_r - E) psi = 0; the normalized defect
// must shrink like h^2.
//
// The step pair (1e-3, 1e-4) only resolves the h^2 law when the truncation
// term h^2 (2 m |V_r - E|)^2 / 24 stays above the cancellation noise of the
// second difference (about eps |psi| / h^2), so candidate states are ranked
// by the curvature score min_r m_r |V_r - E| and midpoints close to a node of
// u are rejected.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <kpx/bands.hpp>
#include <kpx/model.hpp>
#include <kpx/wavefunction.hpp>

namespace kpxtest {

inline double fd_residual(const kpx::BlochState& st, double x, double mass,
                          double region_potential, double h) {
  const kpx::Cmplx below = kpx::bloch_wave(st, x - h);
  const kpx::Cmplx center = kpx::bloch_wave(st, x);
  const kpx::Cmplx above = kpx::bloch_wave(st, x + h);
  const kpx::Cmplx second = (above - 2.0 * center + below) / (h * h);
  const kpx::Cmplx defect =
      -second / (2.0 * mass) + (region_potential - st.E) * center;
  const double scale = (std::abs(st.E) + st.params.V) *
                       std::max(std::abs(center), 1e-30);
  return std::abs(defect) / scale;
}

struct FdRegionCheck {
  double midpoint = 0.0;
  double res_coarse = 0.0;  ///< defect at h = 1e-3
  double res_fine = 0.0;    ///< defect at h = 1e-4
  double ratio = 0.0;       ///< coarse / fine, near 100 for an h^2 law
};

struct FdResult {
  kpx::BlochState state;
  double score = 0.0;  ///< min_r m_r |V_r - E| of the chosen root
  FdRegionCheck region1;
  FdRegionCheck region2;
};

/// Build the best-conditioned on-locus state in the window and measure the
/// finite-difference defect at both region midpoints.  Returns nullopt when
/// no root clears the curvature and node guards.
inline std::optional<FdResult> fd_probe(const kpx::ModelParams& p, double alpha,
                                        double e_lo, double e_hi,
                                        kpx::SignBranch sign = kpx::SignBranch::Plus) {
  const double v1 = kpx::potential_of(p, kpx::Region::I);
  const double v2 = kpx::potential_of(p, kpx::Region::II);
  std::vector<std::pair<double, double>> scored;  // (score, E)
  for (double E : kpx::energy_roots(p, alpha, e_lo, e_hi)) {
    const double s1 = p.m1 * std::abs(v1 - E);
    const double s2 = p.m2 * std::abs(v2 - E);
    scored.emplace_back(std::min(s1, s2), E);
  }
  std::sort(scored.rbegin(), scored.rend());

  for (const auto& [score, E] : scored) {
    if (score < 8.0) break;
    const auto g = kpx::CellGeometry::make(p, kpx::CellType::KP1, 0.0);
    const auto st = kpx::build_state(p, g, E, alpha,
                                     kpx::Normalization::BUnit, sign);
    const double mid2 = 0.5 * (g.x1 + g.x2);
    const double mid1 = 0.5 * (g.x2 + g.x3);
    double umax = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = g.x1 + (g.x3 - g.x1) * i / 100.0;
      umax = std::max(umax, std::abs(kpx::periodic_part(st, x)));
    }
    if (std::abs(kpx::periodic_part(st, mid1)) < 5e-2 * umax) continue;
    if (std::abs(kpx::periodic_part(st, mid2)) < 5e-2 * umax) continue;

    FdResult out{st, score, {}, {}};
    out.region1.midpoint = mid1;
    out.region1.res_coarse = fd_residual(st, mid1, p.m1, v1, 1e-3);
    out.region1.res_fine = fd_residual(st, mid1, p.m1, v1, 1e-4);
    out.region1.ratio = out.region1.res_coarse / out.region1.res_fine;
    out.region2.midpoint = mid2;
    out.region2.res_coarse = fd_residual(st, mid2, p.m2, v2, 1e-3);
    out.region2.res_fine = fd_residual(st, mid2, p.m2, v2, 1e-4);
    out.region2.ratio = out.region2.res_coarse / out.region2.res_fine;
    return out;
  }
  return std::nullopt;
}

}  // namespace kpxtest
