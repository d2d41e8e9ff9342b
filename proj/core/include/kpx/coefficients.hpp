#pragma once

#include <optional>

#include "kpx/dispersion.hpp"
#include "kpx/model.hpp"

namespace kpx {

/// Relative degeneracy threshold for closed-form denominators: a quotient
/// num / den throws DegenerateDenominator when
/// |den| < kDegenerateRel * |num| + kDegenerateFloor.
inline constexpr double kDegenerateRel = 1e-12;
inline constexpr double kDegenerateFloor = 1e-300;

/// nullspace_solve treats the matrix as rank deficient beyond rank 3 when the
/// third singular value falls below kRankTol times the largest.
inline constexpr double kRankTol = 1e-10;

/// nullspace_solve accepts a matrix as singular (on the dispersion locus)
/// when |det| <= kDetLocusTol times the Hadamard row-norm scale.
inline constexpr double kDetLocusTol = 1e-6;

/// num / den, guarded by the degeneracy rule above.
Cmplx guarded_ratio(Cmplx num, Cmplx den);

/// The two amplitude ratios that pin a Bloch state once one amplitude per
/// region is fixed: region1_ratio = A / B, region2_ratio = C / D in the basis
/// of BasisExponents.
struct CoefficientPair {
  Cmplx region1_ratio;  ///< A / B
  Cmplx region2_ratio;  ///< C / D
  CellType cell_type = CellType::KP1;
  Branch branch = Branch::BarrierGap;
  std::optional<SignBranch> sign;  ///< engaged on WellNegative only
};

/// Closed-form ratios for the barrier model at 0 <= E <= V on the dispersion
/// locus.  Valid for either cell type and any mass ratio.
CoefficientPair barrier_coefficients(const ModelParams& params,
                                     const CellGeometry& geometry, double E,
                                     double alpha);

/// Closed-form ratios for the well model at E >= 0.
CoefficientPair well_coefficients(const ModelParams& params,
                                  const CellGeometry& geometry, double E,
                                  double alpha);

/// Closed-form ratios for the well model at -V <= E < 0, for the chosen
/// orientation of the decaying region-I pair.
CoefficientPair well_negative_coefficients(const ModelParams& params,
                                           const CellGeometry& geometry,
                                           double E, double alpha,
                                           SignBranch sign);

/// Historical equal-mass specializations of the barrier-model ratios.
///  - Bloss:       cell split at x2 = a (KP1 ordering).
///  - ClassicalKP: cell split at x2 = 0 (KP2 ordering).
///  - Gubanov:     cell split at x2 = b / 2 (KP2 ordering).
enum class ReferenceVariant { Bloss, ClassicalKP, Gubanov };

/// Evaluate a reference variant from its own independently written formulas.
/// Requires the barrier model and m1 == m2 (else RequiresEqualMasses).
CoefficientPair reference_coefficients(ReferenceVariant variant,
                                       const ModelParams& params, double E,
                                       double alpha);

/// Which amplitude is pinned to exactly 1 when solving the matching system.
enum class PinnedCoefficient { AUnit, BUnit, CUnit, DUnit };

struct NullspaceSolution {
  CoefficientPair pair;
  /// ||M v|| / (||M||_F ||v||) of the assembled null vector; a conditioning
  /// probe callers can use to choose between pins.
  double relative_residual = 0.0;
};

/// Formula-free oracle: pin one amplitude of the 4x4 matching system to 1 and
/// recover the rest by least squares.  Demands an actual rank-3 matrix:
/// throws NotOnDispersionLocus when the determinant is not small against the
/// Hadamard scale, and RankDeficiencyTooHigh when a second singular value
/// collapses.
NullspaceSolution nullspace_solve(const Mat4c& matrix, PinnedCoefficient pin,
                                  CellType cell_type, Branch branch,
                                  std::optional<SignBranch> sign = {});

/// Convenience wrapper returning just the ratios.
CoefficientPair nullspace_oracle(const Mat4c& matrix, PinnedCoefficient pin,
                                 CellType cell_type, Branch branch,
                                 std::optional<SignBranch> sign = {});

}  // namespace kpx
