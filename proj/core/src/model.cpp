#include "kpx/model.hpp"

#include <cmath>
#include <string>

namespace kpx {

void validate_params(const ModelParams& params) {
  auto check_finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw NonFinite(name);
  };
  check_finite(params.a, "a");
  check_finite(params.b, "b");
  check_finite(params.V, "V");
  check_finite(params.m1, "m1");
  check_finite(params.m2, "m2");

  if (params.a < 0.0) throw NonPositiveParameter("a");
  if (params.b < 0.0) throw NonPositiveParameter("b");
  if (params.a + params.b <= 0.0) throw NonPositiveParameter("a+b");
  if (params.V <= 0.0) throw NonPositiveParameter("V");
  if (params.m1 <= 0.0) throw NonPositiveParameter("m1");
  if (params.m2 <= 0.0) throw NonPositiveParameter("m2");
}

double region1_width(const ModelParams& params) {
  return params.kind == ModelKind::Barrier ? params.b : params.a;
}

double region2_width(const ModelParams& params) {
  return params.kind == ModelKind::Barrier ? params.a : params.b;
}

CellGeometry CellGeometry::make(const ModelParams& params, CellType cell_type,
                                double x2) {
  if (!std::isfinite(x2)) throw NonFinite("x2");
  const double w1 = region1_width(params);
  const double w2 = region2_width(params);
  CellGeometry g;
  g.cell_type = cell_type;
  g.x2 = x2;
  if (cell_type == CellType::KP1) {
    g.x1 = x2 - w2;  // region II on the left
    g.x3 = x2 + w1;  // region I on the right
  } else {
    g.x1 = x2 - w1;
    g.x3 = x2 + w2;
  }
  return g;
}

Region region_at(const CellGeometry& geometry, double x_in_cell) {
  const bool left = x_in_cell < geometry.x2;
  if (geometry.cell_type == CellType::KP1) {
    return left ? Region::II : Region::I;
  }
  return left ? Region::I : Region::II;
}

double potential_of(const ModelParams& params, Region region) {
  if (params.kind == ModelKind::Barrier) {
    return region == Region::I ? params.V : 0.0;
  }
  return region == Region::I ? 0.0 : -params.V;
}

double mass_of(const ModelParams& params, Region region) {
  return region == Region::I ? params.m1 : params.m2;
}

double reduce_to_cell(const CellGeometry& geometry, double period, double x) {
  if (!std::isfinite(x)) throw NonFinite("x");
  double n = std::floor((x - geometry.x1) / period);
  double reduced = x - n * period;
  // Round-off at the seam can land exactly on x1 + period; fold it back.
  if (reduced >= geometry.x1 + period) reduced -= period;
  if (reduced < geometry.x1) reduced += period;
  return reduced;
}

double piecewise_potential(const ModelParams& params,
                           const CellGeometry& geometry, double x) {
  const double reduced = reduce_to_cell(geometry, params.period(), x);
  return potential_of(params, region_at(geometry, reduced));
}

double piecewise_mass(const ModelParams& params, const CellGeometry& geometry,
                      double x) {
  const double reduced = reduce_to_cell(geometry, params.period(), x);
  return mass_of(params, region_at(geometry, reduced));
}

Wavenumbers wavenumbers(const ModelParams& params, double E) {
  if (!std::isfinite(E)) throw NonFinite("E");
  Wavenumbers wn;
  if (params.kind == ModelKind::Barrier) {
    if (E < 0.0 || E > params.V) {
      throw EnergyOutOfBranch("barrier model requires 0 <= E <= V, got E = " +
                              std::to_string(E));
    }
    wn.branch = Branch::BarrierGap;
    wn.first = std::sqrt(2.0 * params.m1 * (params.V - E));
    wn.second = std::sqrt(2.0 * params.m2 * E);
    wn.at_endpoint = (E == 0.0 || E == params.V);
    return wn;
  }
  if (E >= 0.0) {
    wn.branch = Branch::WellPositive;
    wn.first = std::sqrt(2.0 * params.m1 * E);
    wn.second = std::sqrt(2.0 * params.m2 * (E + params.V));
    wn.at_endpoint = (E == 0.0);
    return wn;
  }
  if (E < -params.V) {
    throw EnergyOutOfBranch("well model requires E >= -V, got E = " +
                            std::to_string(E));
  }
  wn.branch = Branch::WellNegative;
  wn.first = std::sqrt(-2.0 * params.m1 * E);
  wn.second = std::sqrt(2.0 * params.m2 * (E + params.V));
  wn.at_endpoint = (E == -params.V);
  return wn;
}

}  // namespace kpx
