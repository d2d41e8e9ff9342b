#include "kpx/wavefunction.hpp"

#include <algorithm>
#include <cmath>

namespace kpx {

namespace {

Cmplx cis(double t) { return {std::cos(t), std::sin(t)}; }

// Evaluates the per-region plane-wave expressions of one state.  Exponents
// are derived once; x must already lie in (or be interpreted in) cell
// coordinates.
struct Evaluator {
  const BlochState& state;
  BasisExponents be;

  explicit Evaluator(const BlochState& s)
      : state(s),
        be(basis_exponents(s.params, s.E, s.alpha,
                           s.sign.value_or(SignBranch::Plus))) {}

  Cmplx region1(double x) const {
    return state.B * (state.coefficients.region1_ratio *
                          std::exp(be.p1_plus * x) +
                      std::exp(be.p1_minus * x));
  }
  Cmplx region2(double x) const {
    return state.D * (state.coefficients.region2_ratio *
                          std::exp(be.p2_plus * x) +
                      std::exp(be.p2_minus * x));
  }
  Cmplx region1_deriv(double x) const {
    return state.B * (state.coefficients.region1_ratio * be.p1_plus *
                          std::exp(be.p1_plus * x) +
                      be.p1_minus * std::exp(be.p1_minus * x));
  }
  Cmplx region2_deriv(double x) const {
    return state.D * (state.coefficients.region2_ratio * be.p2_plus *
                          std::exp(be.p2_plus * x) +
                      be.p2_minus * std::exp(be.p2_minus * x));
  }

  Cmplx value_at(double x_reduced) const {
    return region_at(state.geometry, x_reduced) == Region::I
               ? region1(x_reduced)
               : region2(x_reduced);
  }
  Cmplx deriv_at(double x_reduced) const {
    return region_at(state.geometry, x_reduced) == Region::I
               ? region1_deriv(x_reduced)
               : region2_deriv(x_reduced);
  }
};

double relative_mismatch(Cmplx lhs, Cmplx rhs) {
  const double scale =
      std::max({std::abs(lhs), std::abs(rhs), kDegenerateFloor});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

BlochState build_state(const ModelParams& params, const CellGeometry& geometry,
                       double E, double alpha, Normalization normalization,
                       SignBranch sign) {
  validate_params(params);
  const double residual = dispersion_residual(params, geometry, E, alpha);
  if (std::abs(residual) > kOnLocusTol) {
    throw NotOnDispersionLocus("dispersion residual " +
                               std::to_string(residual) +
                               " exceeds the on-locus tolerance");
  }

  BlochState state;
  state.params = params;
  state.geometry = geometry;
  state.E = E;
  state.alpha = alpha;
  state.wn = wavenumbers(params, E);

  if (params.kind == ModelKind::Barrier) {
    state.coefficients = barrier_coefficients(params, geometry, E, alpha);
  } else if (E >= 0.0) {
    state.coefficients = well_coefficients(params, geometry, E, alpha);
  } else {
    state.sign = sign;
    state.coefficients =
        well_negative_coefficients(params, geometry, E, alpha, sign);
  }

  state.B = Cmplx(1.0);
  // Value continuity at x2 fixes the region-II amplitude against region I.
  const BasisExponents be = basis_exponents(params, E, alpha, sign);
  const Cmplx u1_x2 =
      state.coefficients.region1_ratio * std::exp(be.p1_plus * geometry.x2) +
      std::exp(be.p1_minus * geometry.x2);
  const Cmplx u2_unit_x2 =
      state.coefficients.region2_ratio * std::exp(be.p2_plus * geometry.x2) +
      std::exp(be.p2_minus * geometry.x2);
  state.D = state.B * guarded_ratio(u1_x2, u2_unit_x2);

  if (normalization == Normalization::L2Cell) {
    const double norm_sq = periodic_part_norm_sq(state);
    if (!std::isfinite(norm_sq) || norm_sq <= 0.0) {
      throw NonFinite("periodic-part norm");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    state.B *= inv_norm;
    state.D *= inv_norm;
  }
  return state;
}

Cmplx periodic_part(const BlochState& state, double x) {
  const double reduced =
      reduce_to_cell(state.geometry, state.params.period(), x);
  return Evaluator(state).value_at(reduced);
}

Cmplx periodic_part_derivative(const BlochState& state, double x) {
  const double reduced =
      reduce_to_cell(state.geometry, state.params.period(), x);
  return Evaluator(state).deriv_at(reduced);
}

Cmplx bloch_wave(const BlochState& state, double x) {
  return cis(state.alpha * x) * periodic_part(state, x);
}

double MatchingResiduals::max_residual() const {
  return std::max({value_x2, derivative_x2, periodic_value,
                   periodic_derivative});
}

MatchingResiduals matching_residuals(const BlochState& state) {
  const Evaluator ev(state);
  const CellGeometry& g = state.geometry;
  const double y = state.params.mass_ratio();
  const double x_end1 = (g.cell_type == CellType::KP1) ? g.x3 : g.x1;
  const double x_end2 = (g.cell_type == CellType::KP1) ? g.x1 : g.x3;

  MatchingResiduals r;
  r.value_x2 = relative_mismatch(ev.region1(g.x2), ev.region2(g.x2));
  r.derivative_x2 =
      relative_mismatch(y * ev.region1_deriv(g.x2), ev.region2_deriv(g.x2));
  r.periodic_value = relative_mismatch(ev.region1(x_end1), ev.region2(x_end2));
  r.periodic_derivative =
      relative_mismatch(y * ev.region1_deriv(x_end1), ev.region2_deriv(x_end2));
  return r;
}

double periodic_part_norm_sq(const BlochState& state, int panels) {
  if (panels < 2) throw BadRange("panels must be >= 2");
  const Evaluator ev(state);
  const CellGeometry& g = state.geometry;
  const double width_left = g.x2 - g.x1;
  const double width_right = g.x3 - g.x2;
  const double width_total = g.x3 - g.x1;

  auto even_panels = [&](double width) {
    if (width <= 0.0) return 0;
    int n = static_cast<int>(
        std::lround(static_cast<double>(panels) * width / width_total));
    n = std::max(n, 2);
    if (n % 2 != 0) ++n;
    return n;
  };

  auto simpson = [](double lo, double hi, int n, auto&& f) {
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int j = 1; j < n; ++j) acc += (j % 2 != 0 ? 4.0 : 2.0) * f(lo + h * j);
    return acc * h / 3.0;
  };

  // Each half of the cell is owned by a single region, so integrate that
  // region's analytic expression over the closed subinterval.
  const bool left_is_region1 = (g.cell_type == CellType::KP2);
  double total = 0.0;
  if (const int n_left = even_panels(width_left); n_left > 0) {
    total += simpson(g.x1, g.x2, n_left, [&](double x) {
      return std::norm(left_is_region1 ? ev.region1(x) : ev.region2(x));
    });
  }
  if (const int n_right = even_panels(width_right); n_right > 0) {
    total += simpson(g.x2, g.x3, n_right, [&](double x) {
      return std::norm(left_is_region1 ? ev.region2(x) : ev.region1(x));
    });
  }
  return total;
}

std::vector<WaveSample> sample(const BlochState& state, double x_min,
                               double x_max, int count) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw NonFinite("sample range");
  }
  if (!(x_min < x_max)) throw BadRange("sample range must satisfy x_min < x_max");
  if (count < 2) throw BadRange("sample count must be >= 2");

  const Evaluator ev(state);
  const double period = state.params.period();
  std::vector<WaveSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double x =
        x_min + (x_max - x_min) * static_cast<double>(j) / (count - 1);
    const double reduced = reduce_to_cell(state.geometry, period, x);
    const Cmplx u = ev.value_at(reduced);
    out.push_back({x, u, cis(state.alpha * x) * u});
  }
  return out;
}

}  // namespace kpx
