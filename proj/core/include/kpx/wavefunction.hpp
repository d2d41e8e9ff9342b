#pragma once

#include <optional>
#include <vector>

#include "kpx/coefficients.hpp"
#include "kpx/dispersion.hpp"
#include "kpx/model.hpp"

namespace kpx {

/// build_state accepts (E, alpha) as on-locus when |dispersion_residual| is
/// at most this.
inline constexpr double kOnLocusTol = 1e-9;

enum class Normalization {
  BUnit,   ///< region-I reference amplitude B = 1
  L2Cell,  ///< unit L2 norm of the periodic part over one cell
};

/// A fully assembled Bloch state psi(x) = exp(i alpha x) u(x).
struct BlochState {
  ModelParams params;
  CellGeometry geometry;
  double E = 0.0;
  double alpha = 0.0;
  Wavenumbers wn;
  std::optional<SignBranch> sign;  ///< engaged on WellNegative only
  CoefficientPair coefficients;
  Cmplx B;  ///< region-I reference amplitude (A = region1_ratio * B)
  Cmplx D;  ///< region-II reference amplitude (C = region2_ratio * D)
};

/// Assemble a Bloch state at an admissible (E, alpha): closed-form ratios fix
/// the shape within each region, and value continuity at x2 fixes D against
/// B.  Throws NotOnDispersionLocus when the pair misses the locus by more
/// than kOnLocusTol.
BlochState build_state(const ModelParams& params, const CellGeometry& geometry,
                       double E, double alpha,
                       Normalization normalization = Normalization::BUnit,
                       SignBranch sign = SignBranch::Plus);

/// Periodic part u(x) at arbitrary x (reduced into the cell first).
Cmplx periodic_part(const BlochState& state, double x);

/// du/dx at arbitrary x, differentiating the region expression as written
/// (Bloch phase included in the exponents).
Cmplx periodic_part_derivative(const BlochState& state, double x);

/// Full Bloch wave exp(i alpha x) u(x); x is not reduced.
Cmplx bloch_wave(const BlochState& state, double x);

/// Normalized interface and periodicity defects of the assembled state.  Each
/// is |mismatch| / max(|side1|, |side2|) with the mass weight y = m2 / m1 on
/// region-I derivatives.
struct MatchingResiduals {
  double value_x2 = 0.0;
  double derivative_x2 = 0.0;
  double periodic_value = 0.0;
  double periodic_derivative = 0.0;

  double max_residual() const;
};

MatchingResiduals matching_residuals(const BlochState& state);

/// Composite Simpson integral of |u|^2 over one cell, split pro rata at x2
/// into two even-panel runs.  `panels` is the total panel budget.
double periodic_part_norm_sq(const BlochState& state, int panels = 10000);

struct WaveSample {
  double x = 0.0;
  Cmplx u;
  Cmplx psi;
};

/// Evaluate u and psi on a uniform closed grid [x_min, x_max] with `count`
/// points.  Throws BadRange on an empty or reversed interval or count < 2.
std::vector<WaveSample> sample(const BlochState& state, double x_min,
                               double x_max, int count);

}  // namespace kpx
