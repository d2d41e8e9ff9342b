#include "kpx/validation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kpx/bands.hpp"
#include "kpx/coefficients.hpp"
#include "kpx/dispersion.hpp"
#include "kpx/wavefunction.hpp"

namespace kpx {

namespace {

// On-locus acceptance for randomized draws.  Tighter than build_state's gate
// so the closed forms are probed at points where the locus membership itself
// contributes no error.
constexpr double kSuiteLocusTol = 1e-13;

constexpr double kPairingTol = 1e-9;
constexpr double kAgreementTol = 1e-10;
constexpr double kResidualTol = 1e-10;
constexpr double kReductionTol = 1e-12;

Cmplx cis(double t) { return {std::cos(t), std::sin(t)}; }

double rel_diff(Cmplx u, Cmplx v) {
  const double scale = std::max({std::abs(u), std::abs(v), 1e-300});
  return std::abs(u - v) / scale;
}

ModelParams draw_params(Rng& rng, ModelKind kind) {
  ModelParams p;
  p.kind = kind;
  p.a = rng.uniform(0.1, 5.0);
  p.b = rng.uniform(0.1, 5.0);
  p.V = rng.uniform(0.5, 20.0);
  p.m1 = rng.uniform(0.2, 5.0);
  p.m2 = rng.uniform(0.2, 5.0);
  return p;
}

double draw_energy(Rng& rng, const ModelParams& p, Branch branch) {
  switch (branch) {
    case Branch::BarrierGap:
      return p.V * rng.uniform(0.02, 0.98);
    case Branch::WellPositive:
      return p.V * rng.uniform(0.02, 3.0);
    case Branch::WellNegative:
      return -p.V * rng.uniform(0.02, 0.98);
  }
  return 0.0;
}

struct ComboSpec {
  ModelKind kind;
  Branch branch;
  CellType cell;
  SignBranch sign;
};

// Eight model/branch/cell/sign combinations cycled by randomized state
// suites so every closed-form family is exercised evenly.
ComboSpec combo_spec(int index) {
  switch (index % 8) {
    case 0: return {ModelKind::Barrier, Branch::BarrierGap, CellType::KP1,
                    SignBranch::Plus};
    case 1: return {ModelKind::Barrier, Branch::BarrierGap, CellType::KP2,
                    SignBranch::Plus};
    case 2: return {ModelKind::Well, Branch::WellPositive, CellType::KP1,
                    SignBranch::Plus};
    case 3: return {ModelKind::Well, Branch::WellPositive, CellType::KP2,
                    SignBranch::Plus};
    case 4: return {ModelKind::Well, Branch::WellNegative, CellType::KP1,
                    SignBranch::Plus};
    case 5: return {ModelKind::Well, Branch::WellNegative, CellType::KP1,
                    SignBranch::Minus};
    case 6: return {ModelKind::Well, Branch::WellNegative, CellType::KP2,
                    SignBranch::Plus};
    default: return {ModelKind::Well, Branch::WellNegative, CellType::KP2,
                     SignBranch::Minus};
  }
}

struct LocusDraw {
  ModelParams params;
  CellGeometry geometry;
  ComboSpec combo;
  double E = 0.0;
  double alpha = 0.0;
};

// Draw random parameters, pick a random alpha column, and accept only energy
// roots that sit on the locus to kSuiteLocusTol.  Narrow bands and steep
// corners are redrawn deterministically, keeping fixed-seed runs stable.
bool draw_on_locus(Rng& rng, int combo_index, LocusDraw& out) {
  const ComboSpec combo = combo_spec(combo_index);
  const ModelParams p = draw_params(rng, combo.kind);
  const double zone = M_PI / p.period();
  const double alpha = zone * rng.uniform(0.001, 0.999);

  double lo = 0.0, hi = 0.0;
  switch (combo.branch) {
    case Branch::BarrierGap:
      lo = 1e-3 * p.V;
      hi = (1.0 - 1e-3) * p.V;
      break;
    case Branch::WellPositive:
      lo = 1e-3 * p.V;
      hi = 3.0 * p.V;
      break;
    case Branch::WellNegative:
      lo = -(1.0 - 1e-3) * p.V;
      hi = -1e-3 * p.V;
      break;
  }
  const std::vector<double> roots = energy_roots(p, alpha, lo, hi, 2000);
  std::vector<double> good;
  CellGeometry probe = CellGeometry::make(p, combo.cell, 0.0);
  for (double e : roots) {
    if (std::abs(dispersion_residual(p, probe, e, alpha)) <= kSuiteLocusTol) {
      good.push_back(e);
    }
  }
  const double x2 = rng.uniform(-2.0, 2.0);
  if (good.empty()) {
    return false;
  }
  out.params = p;
  out.combo = combo;
  out.geometry = CellGeometry::make(p, combo.cell, x2);
  out.alpha = alpha;
  out.E = good[static_cast<std::size_t>(rng.pick(static_cast<int>(good.size())))];
  return true;
}

CoefficientPair closed_form_for(const LocusDraw& d) {
  switch (d.combo.branch) {
    case Branch::BarrierGap:
      return barrier_coefficients(d.params, d.geometry, d.E, d.alpha);
    case Branch::WellPositive:
      return well_coefficients(d.params, d.geometry, d.E, d.alpha);
    case Branch::WellNegative:
      return well_negative_coefficients(d.params, d.geometry, d.E, d.alpha,
                                        d.combo.sign);
  }
  throw Error("unreachable combo branch");
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.passed(); });
}

SuiteResult run_oracle_equivalence(std::uint64_t seed, int trials) {
  SuiteResult res;
  res.suite = "oracle_equivalence";
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const ModelKind kind = rng.coin() ? ModelKind::Barrier : ModelKind::Well;
    const ModelParams p = draw_params(rng, kind);
    const CellType cell = rng.coin() ? CellType::KP1 : CellType::KP2;
    const double x2 = rng.uniform(-2.0, 2.0);
    const CellGeometry geom = CellGeometry::make(p, cell, x2);
    Branch branch = Branch::BarrierGap;
    if (kind == ModelKind::Well) {
      branch = rng.coin() ? Branch::WellPositive : Branch::WellNegative;
    }
    const SignBranch sign = (branch == Branch::WellNegative && rng.coin())
                                ? SignBranch::Minus
                                : SignBranch::Plus;
    const double E = draw_energy(rng, p, branch);

    const std::vector<DispersionPoint> closed = solve_alpha(p, E);
    const std::vector<double> det_roots = det_alpha_zeros(p, geom, E, sign);

    ++res.trials;
    if (closed.size() != det_roots.size()) {
      ++res.failures;
      res.worst_error = std::max(res.worst_error, 1.0);
      continue;
    }
    double worst_pair = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      worst_pair =
          std::max(worst_pair, std::abs(closed[i].alpha - det_roots[i]));
    }
    res.worst_error = std::max(res.worst_error, worst_pair);
    if (worst_pair > kPairingTol) ++res.failures;
  }
  return res;
}

SuiteResult run_coefficient_agreement(std::uint64_t seed, int trials) {
  SuiteResult res;
  res.suite = "coefficient_agreement";
  Rng rng(seed);
  const long max_attempts = 200L * trials + 1000;
  long attempts = 0;
  while (res.trials < trials && attempts < max_attempts) {
    ++attempts;
    LocusDraw d;
    if (!draw_on_locus(rng, res.trials, d)) continue;
    ++res.trials;

    CoefficientPair closed;
    try {
      closed = closed_form_for(d);
    } catch (const DegenerateDenominator&) {
      ++res.excluded;
      continue;
    }

    const Mat4c M =
        matching_matrix(d.params, d.geometry, d.E, d.alpha, d.combo.sign);
    std::optional<SignBranch> sign_tag;
    if (d.combo.branch == Branch::WellNegative) sign_tag = d.combo.sign;
    try {
      const NullspaceSolution pin_b = nullspace_solve(
          M, PinnedCoefficient::BUnit, d.combo.cell, d.combo.branch, sign_tag);
      const NullspaceSolution pin_d = nullspace_solve(
          M, PinnedCoefficient::DUnit, d.combo.cell, d.combo.branch, sign_tag);
      const NullspaceSolution& best =
          (pin_b.relative_residual <= pin_d.relative_residual) ? pin_b : pin_d;
      const double err =
          std::max(rel_diff(closed.region1_ratio, best.pair.region1_ratio),
                   rel_diff(closed.region2_ratio, best.pair.region2_ratio));
      res.worst_error = std::max(res.worst_error, err);
      if (err > kAgreementTol) ++res.failures;
    } catch (const Error&) {
      ++res.excluded;
    }
  }
  return res;
}

SuiteResult run_matching_residuals(std::uint64_t seed, int trials) {
  SuiteResult res;
  res.suite = "matching_residuals";
  Rng rng(seed);
  const long max_attempts = 200L * trials + 1000;
  long attempts = 0;
  while (res.trials < trials && attempts < max_attempts) {
    ++attempts;
    LocusDraw d;
    if (!draw_on_locus(rng, res.trials, d)) continue;
    ++res.trials;
    const Normalization norm =
        (res.trials % 2 == 0) ? Normalization::L2Cell : Normalization::BUnit;
    try {
      const BlochState state = build_state(d.params, d.geometry, d.E, d.alpha,
                                           norm, d.combo.sign);
      const double worst = matching_residuals(state).max_residual();
      res.worst_error = std::max(res.worst_error, worst);
      if (worst > kResidualTol) ++res.failures;
    } catch (const DegenerateDenominator&) {
      ++res.excluded;
    }
  }
  return res;
}

SuiteResult run_reduction_identities(std::uint64_t seed, int trials) {
  SuiteResult res;
  res.suite = "reduction_identities";
  Rng rng(seed);
  const long max_attempts = 50L * trials + 100;
  long attempts = 0;
  while (res.trials < trials && attempts < max_attempts) {
    ++attempts;
    ModelParams p;
    p.kind = ModelKind::Barrier;
    p.a = rng.uniform(0.1, 5.0);
    p.b = rng.uniform(0.1, 5.0);
    p.V = rng.uniform(0.5, 20.0);
    p.m1 = rng.uniform(0.2, 5.0);
    p.m2 = p.m1;
    const double zone = M_PI / p.period();
    const double alpha = zone * rng.uniform(0.001, 0.999);
    // The identities are algebraic in (E, alpha); the pair need not sit on
    // the dispersion locus.
    const double E = p.V * rng.uniform(0.02, 0.98);

    try {
      const CellGeometry split_a = CellGeometry::make(p, CellType::KP1, p.a);
      const CoefficientPair general_a =
          barrier_coefficients(p, split_a, E, alpha);
      const CoefficientPair bloss =
          reference_coefficients(ReferenceVariant::Bloss, p, E, alpha);

      const CellGeometry split_0 = CellGeometry::make(p, CellType::KP2, 0.0);
      const CoefficientPair general_0 =
          barrier_coefficients(p, split_0, E, alpha);
      const CoefficientPair classical =
          reference_coefficients(ReferenceVariant::ClassicalKP, p, E, alpha);

      const CellGeometry split_mid =
          CellGeometry::make(p, CellType::KP2, 0.5 * p.b);
      const CoefficientPair general_mid =
          barrier_coefficients(p, split_mid, E, alpha);
      const CoefficientPair gubanov =
          reference_coefficients(ReferenceVariant::Gubanov, p, E, alpha);

      const double gamma0 = std::sqrt(2.0 * p.m1 * (p.V - E));
      const double beta0 = std::sqrt(2.0 * p.m1 * E);
      const double err = std::max(
          {rel_diff(general_a.region1_ratio, bloss.region1_ratio),
           rel_diff(general_a.region2_ratio, bloss.region2_ratio),
           rel_diff(general_0.region1_ratio, classical.region1_ratio),
           rel_diff(general_0.region2_ratio, classical.region2_ratio),
           rel_diff(general_mid.region1_ratio, gubanov.region1_ratio),
           rel_diff(general_mid.region2_ratio, gubanov.region2_ratio),
           rel_diff(gubanov.region1_ratio,
                    classical.region1_ratio * std::exp(-gamma0 * p.b)),
           rel_diff(gubanov.region2_ratio,
                    classical.region2_ratio * cis(-beta0 * p.b))});
      ++res.trials;
      res.worst_error = std::max(res.worst_error, err);
      if (err > kReductionTol) ++res.failures;
    } catch (const DegenerateDenominator&) {
      ++res.excluded;
    }
  }
  return res;
}

ValidationReport run_validation(std::uint64_t seed, int trials) {
  ValidationReport report;
  report.seed = seed;
  report.trials = trials;
  if (trials <= 0) return report;
  constexpr std::uint64_t kStride = 0x9E3779B97F4A7C15ULL;
  report.suites.push_back(run_oracle_equivalence(seed + 1 * kStride, trials));
  report.suites.push_back(run_coefficient_agreement(seed + 2 * kStride, trials));
  report.suites.push_back(run_matching_residuals(seed + 3 * kStride, trials));
  report.suites.push_back(run_reduction_identities(seed + 4 * kStride, trials));
  return report;
}

}  // namespace kpx
