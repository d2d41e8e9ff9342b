#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "kpx/model.hpp"

namespace kpx {

/// Wavenumbers below this threshold switch ratio kernels like sin(x L) / x to
/// their series limit L, keeping every formula finite at branch endpoints.
inline constexpr double kSeriesThreshold = 1e-8;

/// sin(x * length) / x, with the series limit for small x.
double ratio_sin(double x, double length);
/// sinh(x * length) / x, with the series limit for small x.
double ratio_sinh(double x, double length);

/// Right-hand side of the barrier-model dispersion relation
/// cos(alpha L) = RHS(E, alpha) for 0 <= E <= V.
double rhs_barrier(const ModelParams& params, double E, double alpha);

/// Well model, E >= 0 branch.
double rhs_well_positive(const ModelParams& params, double E, double alpha);

/// Well model, -V <= E <= 0 branch (analytic continuation of the E >= 0 form).
double rhs_well_negative(const ModelParams& params, double E, double alpha);

/// Dispatch on model kind and sign of E.
double dispersion_rhs(const ModelParams& params, double E, double alpha);

/// cos(alpha L) - dispersion_rhs.  Zero iff (E, alpha) is on the locus.
/// Cell-independent; the geometry argument documents which lattice the caller
/// has in hand.
double dispersion_residual(const ModelParams& params,
                           const CellGeometry& geometry, double E,
                           double alpha);

/// Dense row-major 4x4 complex matrix, small enough to live on the stack.
struct Mat4c {
  std::array<Cmplx, 16> m{};

  Cmplx& operator()(int row, int col) { return m[row * 4 + col]; }
  const Cmplx& operator()(int row, int col) const { return m[row * 4 + col]; }
};

/// Exponent of each plane-wave basis function of the periodic part u(x):
///   region I:  A exp(p1_plus x) + B exp(p1_minus x)
///   region II: C exp(p2_plus x) + D exp(p2_minus x)
/// The Bloch phase exp(-i alpha x) is already folded in.  On WellNegative the
/// region-I oscillation is continued to a real decay whose orientation is
/// picked by `sign`.
struct BasisExponents {
  Cmplx p1_plus, p1_minus;
  Cmplx p2_plus, p2_minus;
};

BasisExponents basis_exponents(const ModelParams& params, double E,
                               double alpha, SignBranch sign = SignBranch::Plus);

/// 4x4 matching matrix in the coefficient order (A, B, C, D): value and
/// mass-weighted derivative continuity at x2, then periodicity of u and of
/// its mass-weighted derivative across the cell ends.
Mat4c matching_matrix(const ModelParams& params, const CellGeometry& geometry,
                      double E, double alpha,
                      SignBranch sign = SignBranch::Plus);

/// Determinant by explicit cofactor expansion.
Cmplx det4(const Mat4c& m);

/// Determinant together with the permanent of entrywise magnitudes.  The
/// permanent bounds the total magnitude summed across the expansion, so
/// 16 * eps * permanent bounds the round-off noise floor of det4.
std::pair<Cmplx, double> det4_with_bound(const Mat4c& m);

/// Product of row Euclidean norms (Hadamard scale) used to normalize
/// determinant magnitudes across wildly different parameter regimes.
double det_scale(const Mat4c& m);

/// Matching-matrix determinant; vanishes exactly on the dispersion locus.
Cmplx det_oracle(const ModelParams& params, const CellGeometry& geometry,
                 double E, double alpha, SignBranch sign = SignBranch::Plus);

/// Controls for the noise-aware scan of a complex-valued function of one real
/// variable.  An interval between grid nodes is only trusted to hold a zero
/// when the surrounding magnitudes rise at least noise_factor above the local
/// round-off floor, and a candidate root is accepted only when the magnitude
/// there drops below accept_rel times the local peak.
struct ComplexRootScan {
  int points = 1024;
  double accept_rel = 1e-6;
  double noise_factor = 1e3;
};

/// Find the zeros of g on [lo, hi].  g returns (value, noise floor estimate).
std::vector<double> complex_zeros(
    const std::function<std::pair<Cmplx, double>(double)>& g, double lo,
    double hi, const ComplexRootScan& config = {});

/// All alpha in [0, pi / L] with det(matching_matrix) = 0 at fixed E.
std::vector<double> det_alpha_zeros(const ModelParams& params,
                                    const CellGeometry& geometry, double E,
                                    SignBranch sign = SignBranch::Plus,
                                    const ComplexRootScan& config = {});

/// All E in [e_min, e_max] with det(matching_matrix) = 0 at fixed alpha.
/// The window must stay inside one spectral branch.
std::vector<double> det_energy_zeros(const ModelParams& params,
                                     const CellGeometry& geometry, double alpha,
                                     double e_min, double e_max,
                                     SignBranch sign = SignBranch::Plus,
                                     const ComplexRootScan& config = {});

/// One admissible (E, alpha) pair; residual is cos(alpha L) - RHS there.
struct DispersionPoint {
  double E = 0.0;
  double alpha = 0.0;
  double residual = 0.0;
};

struct SolverConfig {
  int scan_points = 512;    ///< grid density of the fallback scan
  bool force_scan = false;  ///< skip the closed-form equal-mass path
};

/// All alpha in the reduced zone [0, pi / L] satisfying the dispersion
/// relation at energy E.  Empty when E lies in a gap.  With equal masses the
/// relation is alpha-free and inverted in closed form; otherwise a dense scan
/// plus bisection localizes every crossing to machine precision.
std::vector<DispersionPoint> solve_alpha(const ModelParams& params, double E,
                                         const SolverConfig& config = {});

}  // namespace kpx
