#pragma once

#include <complex>
#include <cstdint>

#include "kpx/errors.hpp"

// Conventions used throughout the library (hbar = 1):
//
// A one-dimensional superlattice of period L = a + b is built from two
// alternating slabs with piecewise-constant potential and effective mass.
// Region I carries mass m1, region II carries mass m2.
//
//   Barrier model:  region I is the barrier (width b, potential V > 0),
//                   region II is the zero-potential slab (width a).
//   Well model:     region I is the zero-potential slab (width a),
//                   region II is the well (width b, potential -V).
//
// A unit cell [x1, x3] is split at x2.  Cell type KP1 places region II on
// [x1, x2] and region I on [x2, x3]; KP2 mirrors that order.  Bloch states
// are written psi(x) = exp(i alpha x) u(x) with u periodic of period L; the
// plane-wave bases below describe u, so the Bloch phase is folded into the
// exponents.

namespace kpx {

using Cmplx = std::complex<double>;

enum class ModelKind { Barrier, Well };

enum class CellType { KP1, KP2 };

/// Spectral branch a state lives on.
///  - BarrierGap: barrier model, 0 <= E <= V (decaying inside the barrier).
///  - WellPositive: well model, E >= 0 (oscillatory in both slabs).
///  - WellNegative: well model, -V <= E < 0 (decaying in the zero slab).
enum class Branch { BarrierGap, WellPositive, WellNegative };

/// Sign choice for the decaying exponentials on the WellNegative branch.
enum class SignBranch { Plus, Minus };

enum class Region { I, II };

struct ModelParams {
  ModelKind kind = ModelKind::Barrier;
  double a = 1.0;   ///< width of the zero-potential slab
  double b = 1.0;   ///< width of the barrier / well slab
  double V = 10.0;  ///< height of the barrier or depth of the well (> 0)
  double m1 = 1.0;  ///< effective mass in region I
  double m2 = 1.0;  ///< effective mass in region II

  double period() const { return a + b; }
  double mass_ratio() const { return m2 / m1; }
};

/// Throws NonPositiveParameter / NonFinite on invalid input.  Slab widths may
/// individually be zero (degenerate single-slab lattice) but not both.
void validate_params(const ModelParams& params);

/// One unit cell [x1, x3] split at x2, with the slab order fixed by cell_type.
struct CellGeometry {
  CellType cell_type = CellType::KP1;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  static CellGeometry make(const ModelParams& params, CellType cell_type,
                           double x2 = 0.0);
};

/// Width of region I (barrier model: b, well model: a).
double region1_width(const ModelParams& params);
/// Width of region II (barrier model: a, well model: b).
double region2_width(const ModelParams& params);

/// Which region owns a point of the cell.  Sub-intervals are taken half-open,
/// [x1, x2) and [x2, x3), so each point has exactly one owner.
Region region_at(const CellGeometry& geometry, double x_in_cell);

/// Potential value on a region: barrier model {I: V, II: 0},
/// well model {I: 0, II: -V}.
double potential_of(const ModelParams& params, Region region);

/// Effective mass on a region: {I: m1, II: m2}.
double mass_of(const ModelParams& params, Region region);

/// Reduce an arbitrary coordinate into [x1, x1 + period) by the lattice
/// translation group.
double reduce_to_cell(const CellGeometry& geometry, double period, double x);

/// Periodic piecewise-constant potential evaluated at an arbitrary x.
double piecewise_potential(const ModelParams& params,
                           const CellGeometry& geometry, double x);

/// Periodic piecewise-constant mass evaluated at an arbitrary x.
double piecewise_mass(const ModelParams& params, const CellGeometry& geometry,
                      double x);

/// Real wavenumbers of the two slabs on a given branch.
///  - BarrierGap:   first = gamma = sqrt(2 m1 (V - E)), second = beta = sqrt(2 m2 E)
///  - WellPositive: first = theta = sqrt(2 m1 E),       second = phi = sqrt(2 m2 (E + V))
///  - WellNegative: first = k = sqrt(-2 m1 E),          second = phi = sqrt(2 m2 (E + V))
struct Wavenumbers {
  Branch branch = Branch::BarrierGap;
  double first = 0.0;
  double second = 0.0;
  bool at_endpoint = false;  ///< E sits exactly on a branch endpoint
};

/// Classify E for the given model and compute both slab wavenumbers.
/// Throws EnergyOutOfBranch when E lies outside every branch of the model.
Wavenumbers wavenumbers(const ModelParams& params, double E);

}  // namespace kpx
