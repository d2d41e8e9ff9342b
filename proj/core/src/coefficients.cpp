#include "kpx/coefficients.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace kpx {

namespace {

constexpr Cmplx kI{0.0, 1.0};

Cmplx cis(double t) { return {std::cos(t), std::sin(t)}; }

}  // namespace

Cmplx guarded_ratio(Cmplx num, Cmplx den) {
  if (std::abs(den) < kDegenerateRel * std::abs(num) + kDegenerateFloor) {
    throw DegenerateDenominator(
        "closed-form denominator degenerates against its numerator");
  }
  return num / den;
}

// Every closed form below is a quotient of two combinations of slab
// trigonometry plus one cross-cell exponential, times a prefactor carrying
// the cell offset x2.  Divisions by a wavenumber are folded into ratio_sin /
// ratio_sinh so branch endpoints stay finite.

CoefficientPair barrier_coefficients(const ModelParams& params,
                                     const CellGeometry& geometry, double E,
                                     double alpha) {
  if (params.kind != ModelKind::Barrier) {
    throw BranchDomainViolation(
        "barrier_coefficients requires the barrier model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  const Wavenumbers wn = wavenumbers(params, E);
  const double gamma = wn.first;
  const double beta = wn.second;
  const double y = params.mass_ratio();
  const double a = params.a, b = params.b, L = params.period();
  const double x2 = geometry.x2;

  const double cos_ba = std::cos(beta * a);
  const double sin_ba_over = ratio_sin(beta, a);  // sin(beta a) / beta
  const double cosh_gb = std::cosh(gamma * b);
  const double sinh_gb_over = ratio_sinh(gamma, b);  // sinh(gamma b) / gamma

  CoefficientPair out;
  out.cell_type = geometry.cell_type;
  out.branch = Branch::BarrierGap;

  if (geometry.cell_type == CellType::KP1) {
    const Cmplx mu_num = cos_ba -
                         (kI * (1.0 - y) * alpha - y * gamma) * sin_ba_over -
                         std::exp(Cmplx(-gamma * b, -alpha * L));
    const Cmplx mu_den = -cos_ba +
                         (kI * (1.0 - y) * alpha + y * gamma) * sin_ba_over +
                         std::exp(Cmplx(gamma * b, -alpha * L));
    out.region1_ratio =
        guarded_ratio(mu_num, mu_den) * std::exp(-2.0 * gamma * x2);

    const Cmplx lam_num = cosh_gb -
                          kI * (((1.0 - y) * alpha + beta) / y) * sinh_gb_over -
                          cis(alpha * L + beta * a);
    const Cmplx lam_den = -cosh_gb +
                          kI * (((1.0 - y) * alpha - beta) / y) * sinh_gb_over +
                          cis(alpha * L - beta * a);
    out.region2_ratio = guarded_ratio(lam_num, lam_den) * cis(-2.0 * beta * x2);
  } else {
    const Cmplx mu_num = cos_ba +
                         (kI * (1.0 - y) * alpha - y * gamma) * sin_ba_over -
                         std::exp(Cmplx(gamma * b, alpha * L));
    const Cmplx mu_den = -cos_ba -
                         (kI * (1.0 - y) * alpha + y * gamma) * sin_ba_over +
                         std::exp(Cmplx(-gamma * b, alpha * L));
    out.region1_ratio =
        guarded_ratio(mu_num, mu_den) * std::exp(-2.0 * gamma * x2);

    const Cmplx lam_num = cosh_gb +
                          kI * (((1.0 - y) * alpha + beta) / y) * sinh_gb_over -
                          cis(-(alpha * L + beta * a));
    const Cmplx lam_den = -cosh_gb -
                          kI * (((1.0 - y) * alpha - beta) / y) * sinh_gb_over +
                          cis(-(alpha * L - beta * a));
    out.region2_ratio = guarded_ratio(lam_num, lam_den) * cis(-2.0 * beta * x2);
  }
  return out;
}

CoefficientPair well_coefficients(const ModelParams& params,
                                  const CellGeometry& geometry, double E,
                                  double alpha) {
  if (params.kind != ModelKind::Well) {
    throw BranchDomainViolation("well_coefficients requires the well model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  if (!std::isfinite(E)) throw NonFinite("E");
  if (E < 0.0) {
    throw EnergyOutOfBranch("positive well branch requires E >= 0");
  }
  const double theta = std::sqrt(2.0 * params.m1 * E);
  const double phi = std::sqrt(2.0 * params.m2 * (E + params.V));
  const double y = params.mass_ratio();
  const double a = params.a, b = params.b, L = params.period();
  const double x2 = geometry.x2;

  const double cos_ta = std::cos(theta * a);
  const double sin_ta_over = ratio_sin(theta, a);
  const double cos_pb = std::cos(phi * b);
  const double sin_pb_over = ratio_sin(phi, b);

  CoefficientPair out;
  out.cell_type = geometry.cell_type;
  out.branch = Branch::WellPositive;

  if (geometry.cell_type == CellType::KP1) {
    const Cmplx nu_num = cos_pb -
                         kI * ((1.0 - y) * alpha - y * theta) * sin_pb_over -
                         cis(-(alpha * L + theta * a));
    const Cmplx nu_den = -cos_pb +
                         kI * ((1.0 - y) * alpha + y * theta) * sin_pb_over +
                         cis(-(alpha * L - theta * a));
    out.region1_ratio = guarded_ratio(nu_num, nu_den) * cis(-2.0 * theta * x2);

    const Cmplx chi_num = cos_ta -
                          kI * (((1.0 - y) * alpha + phi) / y) * sin_ta_over -
                          cis(alpha * L + phi * b);
    const Cmplx chi_den = -cos_ta +
                          kI * (((1.0 - y) * alpha - phi) / y) * sin_ta_over +
                          cis(alpha * L - phi * b);
    out.region2_ratio = guarded_ratio(chi_num, chi_den) * cis(-2.0 * phi * x2);
  } else {
    const Cmplx nu_num = cos_pb +
                         kI * ((1.0 - y) * alpha - y * theta) * sin_pb_over -
                         cis(alpha * L + theta * a);
    const Cmplx nu_den = -cos_pb -
                         kI * ((1.0 - y) * alpha + y * theta) * sin_pb_over +
                         cis(alpha * L - theta * a);
    out.region1_ratio = guarded_ratio(nu_num, nu_den) * cis(-2.0 * theta * x2);

    const Cmplx chi_num = cos_ta +
                          kI * (((1.0 - y) * alpha + phi) / y) * sin_ta_over -
                          cis(-(alpha * L + phi * b));
    const Cmplx chi_den = -cos_ta -
                          kI * (((1.0 - y) * alpha - phi) / y) * sin_ta_over +
                          cis(-(alpha * L - phi * b));
    out.region2_ratio = guarded_ratio(chi_num, chi_den) * cis(-2.0 * phi * x2);
  }
  return out;
}

CoefficientPair well_negative_coefficients(const ModelParams& params,
                                           const CellGeometry& geometry,
                                           double E, double alpha,
                                           SignBranch sign) {
  if (params.kind != ModelKind::Well) {
    throw BranchDomainViolation(
        "well_negative_coefficients requires the well model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  if (!std::isfinite(E)) throw NonFinite("E");
  if (E > 0.0 || E < -params.V) {
    throw EnergyOutOfBranch("negative well branch requires -V <= E <= 0");
  }
  const double k = std::sqrt(-2.0 * params.m1 * E);
  const double phi = std::sqrt(2.0 * params.m2 * (E + params.V));
  const double y = params.mass_ratio();
  const double a = params.a, b = params.b, L = params.period();
  const double x2 = geometry.x2;
  const double s = (sign == SignBranch::Plus) ? 1.0 : -1.0;

  const double cosh_ka = std::cosh(k * a);
  const double sinh_ka_over = ratio_sinh(k, a);
  const double cos_pb = std::cos(phi * b);
  const double sin_pb_over = ratio_sin(phi, b);

  CoefficientPair out;
  out.cell_type = geometry.cell_type;
  out.branch = Branch::WellNegative;
  out.sign = sign;

  if (geometry.cell_type == CellType::KP1) {
    const Cmplx nu_num = cos_pb -
                         (kI * (1.0 - y) * alpha + s * y * k) * sin_pb_over -
                         std::exp(Cmplx(s * k * a, -alpha * L));
    const Cmplx nu_den = -cos_pb +
                         (kI * (1.0 - y) * alpha - s * y * k) * sin_pb_over +
                         std::exp(Cmplx(-s * k * a, -alpha * L));
    out.region1_ratio =
        guarded_ratio(nu_num, nu_den) * std::exp(s * 2.0 * k * x2);

    const Cmplx chi_num = cosh_ka -
                          kI * (((1.0 - y) * alpha + phi) / y) * sinh_ka_over -
                          cis(alpha * L + phi * b);
    const Cmplx chi_den = -cosh_ka +
                          kI * (((1.0 - y) * alpha - phi) / y) * sinh_ka_over +
                          cis(alpha * L - phi * b);
    out.region2_ratio = guarded_ratio(chi_num, chi_den) * cis(-2.0 * phi * x2);
  } else {
    const Cmplx nu_num = cos_pb +
                         (kI * (1.0 - y) * alpha + s * y * k) * sin_pb_over -
                         std::exp(Cmplx(-s * k * a, alpha * L));
    const Cmplx nu_den = -cos_pb -
                         (kI * (1.0 - y) * alpha - s * y * k) * sin_pb_over +
                         std::exp(Cmplx(s * k * a, alpha * L));
    out.region1_ratio =
        guarded_ratio(nu_num, nu_den) * std::exp(s * 2.0 * k * x2);

    const Cmplx chi_num = cosh_ka +
                          kI * (((1.0 - y) * alpha + phi) / y) * sinh_ka_over -
                          cis(-(alpha * L + phi * b));
    const Cmplx chi_den = -cosh_ka -
                          kI * (((1.0 - y) * alpha - phi) / y) * sinh_ka_over +
                          cis(-(alpha * L - phi * b));
    out.region2_ratio = guarded_ratio(chi_num, chi_den) * cis(-2.0 * phi * x2);
  }
  return out;
}

CoefficientPair reference_coefficients(ReferenceVariant variant,
                                       const ModelParams& params, double E,
                                       double alpha) {
  if (params.kind != ModelKind::Barrier) {
    throw BranchDomainViolation(
        "reference variants are defined for the barrier model");
  }
  if (params.m1 != params.m2) {
    throw RequiresEqualMasses(
        "reference variants are equal-mass formulas (m1 == m2)");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  const Wavenumbers wn = wavenumbers(params, E);
  const double gamma0 = wn.first;
  const double beta0 = wn.second;
  const double a = params.a, b = params.b, L = params.period();

  const double cos_ba = std::cos(beta0 * a);
  const double sin_ba_over = ratio_sin(beta0, a);
  const double cosh_gb = std::cosh(gamma0 * b);
  const double sinh_gb_over = ratio_sinh(gamma0, b);

  CoefficientPair out;
  out.branch = Branch::BarrierGap;

  switch (variant) {
    case ReferenceVariant::Bloss: {
      // Cell split at x2 = a, well slab first.
      out.cell_type = CellType::KP1;
      const Cmplx mu_num = cos_ba + gamma0 * sin_ba_over -
                           std::exp(Cmplx(-gamma0 * b, -alpha * L));
      const Cmplx mu_den = -cos_ba + gamma0 * sin_ba_over +
                           std::exp(Cmplx(gamma0 * b, -alpha * L));
      out.region1_ratio =
          guarded_ratio(mu_num, mu_den) * std::exp(-2.0 * gamma0 * a);

      const Cmplx lam_num =
          cosh_gb - kI * beta0 * sinh_gb_over - cis(alpha * L + beta0 * a);
      const Cmplx lam_den =
          -cosh_gb - kI * beta0 * sinh_gb_over + cis(alpha * L - beta0 * a);
      out.region2_ratio =
          guarded_ratio(lam_num, lam_den) * cis(-2.0 * beta0 * a);
      break;
    }
    case ReferenceVariant::ClassicalKP: {
      // Cell split at x2 = 0, barrier slab first.
      out.cell_type = CellType::KP2;
      const Cmplx mu_num = cos_ba - gamma0 * sin_ba_over -
                           std::exp(Cmplx(gamma0 * b, alpha * L));
      const Cmplx mu_den = -cos_ba - gamma0 * sin_ba_over +
                           std::exp(Cmplx(-gamma0 * b, alpha * L));
      out.region1_ratio = guarded_ratio(mu_num, mu_den);

      const Cmplx lam_num =
          cosh_gb + kI * beta0 * sinh_gb_over - cis(-(alpha * L + beta0 * a));
      const Cmplx lam_den =
          -cosh_gb + kI * beta0 * sinh_gb_over + cis(-(alpha * L - beta0 * a));
      out.region2_ratio = guarded_ratio(lam_num, lam_den);
      break;
    }
    case ReferenceVariant::Gubanov: {
      // Cell split at x2 = b / 2, centered on the barrier slab.
      out.cell_type = CellType::KP2;
      const Cmplx mu_num = cos_ba - gamma0 * sin_ba_over -
                           std::exp(Cmplx(gamma0 * b, alpha * L));
      const Cmplx mu_den = -cos_ba - gamma0 * sin_ba_over +
                           std::exp(Cmplx(-gamma0 * b, alpha * L));
      out.region1_ratio =
          guarded_ratio(mu_num, mu_den) * std::exp(-gamma0 * b);

      const Cmplx lam_num =
          cosh_gb + kI * beta0 * sinh_gb_over - cis(-(alpha * L + beta0 * a));
      const Cmplx lam_den =
          -cosh_gb + kI * beta0 * sinh_gb_over + cis(-(alpha * L - beta0 * a));
      out.region2_ratio =
          guarded_ratio(lam_num, lam_den) * cis(-beta0 * b);
      break;
    }
  }
  return out;
}

NullspaceSolution nullspace_solve(const Mat4c& matrix, PinnedCoefficient pin,
                                  CellType cell_type, Branch branch,
                                  std::optional<SignBranch> sign) {
  Eigen::Matrix4cd A;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) A(r, c) = matrix(r, c);
  }

  const auto [det, perm] = det4_with_bound(matrix);
  (void)perm;
  const double scale = std::max(det_scale(matrix), kDegenerateFloor);
  if (std::abs(det) > kDetLocusTol * scale) {
    throw NotOnDispersionLocus(
        "matching determinant is not negligible; the point is off the locus");
  }

  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv(2) <= kRankTol * sv(0)) {
    throw RankDeficiencyTooHigh(
        "matching matrix rank below 3; coefficient ratios are not unique");
  }

  const int pinned_col = static_cast<int>(pin);
  Eigen::Matrix<Cmplx, 4, 3> reduced;
  int t = 0;
  for (int c = 0; c < 4; ++c) {
    if (c == pinned_col) continue;
    reduced.col(t++) = A.col(c);
  }
  const Eigen::Vector4cd rhs = -A.col(pinned_col);
  const Eigen::Vector3cd solved = reduced.colPivHouseholderQr().solve(rhs);

  Eigen::Vector4cd v;
  t = 0;
  for (int c = 0; c < 4; ++c) {
    v(c) = (c == pinned_col) ? Cmplx(1.0) : solved(t++);
  }

  NullspaceSolution out;
  out.relative_residual =
      (A * v).norm() / (A.norm() * v.norm() + kDegenerateFloor);
  out.pair.region1_ratio = guarded_ratio(v(0), v(1));
  out.pair.region2_ratio = guarded_ratio(v(2), v(3));
  out.pair.cell_type = cell_type;
  out.pair.branch = branch;
  out.pair.sign = sign;
  return out;
}

CoefficientPair nullspace_oracle(const Mat4c& matrix, PinnedCoefficient pin,
                                 CellType cell_type, Branch branch,
                                 std::optional<SignBranch> sign) {
  return nullspace_solve(matrix, pin, cell_type, branch, sign).pair;
}

}  // namespace kpx
