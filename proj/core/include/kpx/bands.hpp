#pragma once

#include <vector>

#include "kpx/dispersion.hpp"
#include "kpx/model.hpp"

namespace kpx {

/// Two adjacent bands closer than this are reported as touching.
inline constexpr double kTouchTol = 1e-9;

struct BandScanConfig {
  int alpha_points = 64;     ///< reduced-zone grid size (>= 2)
  int energy_points = 2000;  ///< energy scan density per alpha column
  /// Energy window.  Leave e_min >= e_max (the default) to use the branch
  /// default: [0, V] for BarrierGap, [0, 3V] for WellPositive, and
  /// [-V (1 - 1e-9), 0] for WellNegative.
  double e_min = 0.0;
  double e_max = 0.0;
  SolverConfig solver;  ///< used by gap probes when masses differ
};

/// All energies E in [e_min, e_max] satisfying the dispersion relation at
/// fixed alpha, each localized to machine precision.  Handles both sign
/// crossings and tangential (band-touching) zeros.  The window must stay
/// inside one spectral branch of the model.
std::vector<double> energy_roots(const ModelParams& params, double alpha,
                                 double e_min, double e_max,
                                 int scan_points = 2000);

/// One point of a band: the column index into BandStructure::alphas plus the
/// energy there.
struct BandPoint {
  int alpha_index = 0;
  double E = 0.0;
};

struct Band {
  std::vector<BandPoint> points;  ///< ordered by alpha_index
  double e_bottom = 0.0;          ///< refined lower band edge
  double e_top = 0.0;             ///< refined upper band edge
  bool touches_below = false;
  bool touches_above = false;
};

struct BandStructure {
  Branch branch = Branch::BarrierGap;
  std::vector<double> alphas;  ///< reduced-zone grid, 0 .. pi / L
  std::vector<Band> bands;     ///< sorted by rising energy
};

/// Sample every band of one spectral branch on a uniform reduced-zone grid
/// and refine the band edges.  Bands are stitched column to column by root
/// count and energy continuity.
BandStructure band_structure(const ModelParams& params, Branch branch,
                             const BandScanConfig& config = {});

struct BandEdges {
  double e_bottom = 0.0;
  double e_top = 0.0;
};

/// Edges of the allowed band containing seed_energy.  Expands from the seed
/// until the dispersion relation loses all solutions (or the branch window
/// ends) and bisects each boundary.  Throws NoBandFound when the seed lies in
/// a gap.
BandEdges band_edges(const ModelParams& params, Branch branch,
                     double seed_energy, const BandScanConfig& config = {});

/// Edges of an already-scanned band, refined from its extremal grid samples.
BandEdges band_edges(const ModelParams& params, const BandStructure& structure,
                     int band_index, const BandScanConfig& config = {});

}  // namespace kpx
