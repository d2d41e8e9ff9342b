#include "kpx/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kpx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Bisect a real-valued function with a sign change on [lo, hi] down to a
// machine-width interval.  flo must be f(lo) and nonzero.
template <typename F>
double bisect_real(F&& f, double lo, double hi, double flo) {
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
}

void sort_dedupe(std::vector<double>& xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  xs.swap(out);
}

}  // namespace

double ratio_sin(double x, double length) {
  return x > kSeriesThreshold ? std::sin(x * length) / x : length;
}

double ratio_sinh(double x, double length) {
  return x > kSeriesThreshold ? std::sinh(x * length) / x : length;
}

double rhs_barrier(const ModelParams& params, double E, double alpha) {
  if (params.kind != ModelKind::Barrier) {
    throw BranchDomainViolation("rhs_barrier requires the barrier model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  const Wavenumbers wn = wavenumbers(params, E);
  const double y = params.mass_ratio();
  const double gamma = wn.first;
  const double beta = wn.second;
  const double coupling = ((1.0 - y) * (1.0 - y) * alpha * alpha +
                           y * y * gamma * gamma - beta * beta) /
                          (2.0 * y);
  return std::cosh(gamma * params.b) * std::cos(beta * params.a) +
         coupling * ratio_sinh(gamma, params.b) * ratio_sin(beta, params.a);
}

double rhs_well_positive(const ModelParams& params, double E, double alpha) {
  if (params.kind != ModelKind::Well) {
    throw BranchDomainViolation("rhs_well_positive requires the well model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  if (!std::isfinite(E)) throw NonFinite("E");
  if (E < 0.0) {
    throw EnergyOutOfBranch("positive well branch requires E >= 0");
  }
  const double y = params.mass_ratio();
  const double theta = std::sqrt(2.0 * params.m1 * E);
  const double phi = std::sqrt(2.0 * params.m2 * (E + params.V));
  const double coupling = ((1.0 - y) * (1.0 - y) * alpha * alpha -
                           (y * y * theta * theta + phi * phi)) /
                          (2.0 * y);
  return std::cos(theta * params.a) * std::cos(phi * params.b) +
         coupling * ratio_sin(theta, params.a) * ratio_sin(phi, params.b);
}

double rhs_well_negative(const ModelParams& params, double E, double alpha) {
  if (params.kind != ModelKind::Well) {
    throw BranchDomainViolation("rhs_well_negative requires the well model");
  }
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  if (!std::isfinite(E)) throw NonFinite("E");
  if (E > 0.0 || E < -params.V) {
    throw EnergyOutOfBranch("negative well branch requires -V <= E <= 0");
  }
  const double y = params.mass_ratio();
  const double k = std::sqrt(-2.0 * params.m1 * E);
  const double phi = std::sqrt(2.0 * params.m2 * (E + params.V));
  const double coupling = ((1.0 - y) * (1.0 - y) * alpha * alpha +
                           y * y * k * k - phi * phi) /
                          (2.0 * y);
  return std::cosh(k * params.a) * std::cos(phi * params.b) +
         coupling * ratio_sinh(k, params.a) * ratio_sin(phi, params.b);
}

double dispersion_rhs(const ModelParams& params, double E, double alpha) {
  if (params.kind == ModelKind::Barrier) return rhs_barrier(params, E, alpha);
  return E >= 0.0 ? rhs_well_positive(params, E, alpha)
                  : rhs_well_negative(params, E, alpha);
}

double dispersion_residual(const ModelParams& params,
                           const CellGeometry& geometry, double E,
                           double alpha) {
  (void)geometry;  // the relation does not depend on where the cell is cut
  return std::cos(alpha * params.period()) - dispersion_rhs(params, E, alpha);
}

BasisExponents basis_exponents(const ModelParams& params, double E,
                               double alpha, SignBranch sign) {
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  const Wavenumbers wn = wavenumbers(params, E);
  BasisExponents be;
  if (wn.branch == Branch::BarrierGap) {
    const double gamma = wn.first;
    const double beta = wn.second;
    be.p1_plus = Cmplx(gamma, -alpha);
    be.p1_minus = Cmplx(-gamma, -alpha);
    be.p2_plus = Cmplx(0.0, -alpha + beta);
    be.p2_minus = Cmplx(0.0, -alpha - beta);
  } else if (wn.branch == Branch::WellPositive) {
    const double theta = wn.first;
    const double phi = wn.second;
    be.p1_plus = Cmplx(0.0, -alpha + theta);
    be.p1_minus = Cmplx(0.0, -alpha - theta);
    be.p2_plus = Cmplx(0.0, -alpha + phi);
    be.p2_minus = Cmplx(0.0, -alpha - phi);
  } else {
    // The region-I oscillation theta continues to s * i * k below E = 0, so
    // i * theta becomes -s * k.
    const double k = wn.first;
    const double phi = wn.second;
    const double s = (sign == SignBranch::Plus) ? 1.0 : -1.0;
    be.p1_plus = Cmplx(-s * k, -alpha);
    be.p1_minus = Cmplx(s * k, -alpha);
    be.p2_plus = Cmplx(0.0, -alpha + phi);
    be.p2_minus = Cmplx(0.0, -alpha - phi);
  }
  return be;
}

Mat4c matching_matrix(const ModelParams& params, const CellGeometry& geometry,
                      double E, double alpha, SignBranch sign) {
  const BasisExponents be = basis_exponents(params, E, alpha, sign);
  const double y = params.mass_ratio();
  // Periodicity ties the region-I end of the cell to the region-II end.
  const double x_end1 = (geometry.cell_type == CellType::KP1) ? geometry.x3
                                                              : geometry.x1;
  const double x_end2 = (geometry.cell_type == CellType::KP1) ? geometry.x1
                                                              : geometry.x3;
  auto ee = [](Cmplx p, double x) { return std::exp(p * x); };

  Mat4c M;
  // value continuity of u at the interior interface x2
  M(0, 0) = ee(be.p1_plus, geometry.x2);
  M(0, 1) = ee(be.p1_minus, geometry.x2);
  M(0, 2) = -ee(be.p2_plus, geometry.x2);
  M(0, 3) = -ee(be.p2_minus, geometry.x2);
  // mass-weighted derivative continuity at x2 (weight y on region I)
  M(1, 0) = y * be.p1_plus * M(0, 0);
  M(1, 1) = y * be.p1_minus * M(0, 1);
  M(1, 2) = be.p2_plus * M(0, 2);
  M(1, 3) = be.p2_minus * M(0, 3);
  // periodicity of u across the cell ends
  M(2, 0) = ee(be.p1_plus, x_end1);
  M(2, 1) = ee(be.p1_minus, x_end1);
  M(2, 2) = -ee(be.p2_plus, x_end2);
  M(2, 3) = -ee(be.p2_minus, x_end2);
  // periodicity of the mass-weighted derivative
  M(3, 0) = y * be.p1_plus * M(2, 0);
  M(3, 1) = y * be.p1_minus * M(2, 1);
  M(3, 2) = be.p2_plus * M(2, 2);
  M(3, 3) = be.p2_minus * M(2, 3);
  return M;
}

Cmplx det4(const Mat4c& m) { return det4_with_bound(m).first; }

std::pair<Cmplx, double> det4_with_bound(const Mat4c& M) {
  Cmplx det = 0.0;
  double perm = 0.0;
  double sgn = 1.0;
  for (int j = 0; j < 4; ++j) {
    int c[3];
    int t = 0;
    for (int col = 0; col < 4; ++col) {
      if (col != j) c[t++] = col;
    }
    const Cmplx a = M(1, c[0]), b = M(1, c[1]), cc = M(1, c[2]);
    const Cmplx d = M(2, c[0]), e = M(2, c[1]), f = M(2, c[2]);
    const Cmplx g = M(3, c[0]), h = M(3, c[1]), i = M(3, c[2]);
    const Cmplx minor_det =
        a * (e * i - f * h) - b * (d * i - f * g) + cc * (d * h - e * g);
    const double minor_perm =
        std::abs(a) * (std::abs(e) * std::abs(i) + std::abs(f) * std::abs(h)) +
        std::abs(b) * (std::abs(d) * std::abs(i) + std::abs(f) * std::abs(g)) +
        std::abs(cc) * (std::abs(d) * std::abs(h) + std::abs(e) * std::abs(g));
    det += sgn * M(0, j) * minor_det;
    perm += std::abs(M(0, j)) * minor_perm;
    sgn = -sgn;
  }
  return {det, perm};
}

double det_scale(const Mat4c& M) {
  double scale = 1.0;
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += std::norm(M(r, c));
    scale *= std::sqrt(s);
  }
  return scale;
}

Cmplx det_oracle(const ModelParams& params, const CellGeometry& geometry,
                 double E, double alpha, SignBranch sign) {
  return det4(matching_matrix(params, geometry, E, alpha, sign));
}

namespace {

// Determinant normalized by the Hadamard scale, plus a round-off floor from
// the permanent of entry magnitudes.
std::pair<Cmplx, double> equilibrated_det(const Mat4c& M) {
  const auto [det, perm] = det4_with_bound(M);
  const double scale = std::max(det_scale(M), kTiny);
  return {det / scale, 16.0 * kEps * perm / scale};
}

}  // namespace

std::vector<double> complex_zeros(
    const std::function<std::pair<Cmplx, double>(double)>& g, double lo,
    double hi, const ComplexRootScan& config) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonFinite("scan bounds");
  if (!(hi > lo)) throw BadRange("scan interval must satisfy lo < hi");
  const int n = std::max(config.points, 8);

  std::vector<double> xs(n + 1);
  std::vector<Cmplx> vals(n + 1);
  std::vector<double> noise(n + 1);
  for (int j = 0; j <= n; ++j) {
    xs[j] = lo + (hi - lo) * static_cast<double>(j) / n;
    const auto [v, nf] = g(xs[j]);
    vals[j] = v;
    noise[j] = nf;
  }

  // Peak magnitude and noise floor near bracket j, used to decide whether a
  // sign change is signal or round-off.
  auto local_stats = [&](int j) {
    const int w0 = std::max(0, j - 2);
    const int w1 = std::min(n, j + 3);
    double vmax = 0.0;
    double nmax = 0.0;
    for (int k = w0; k <= w1; ++k) {
      vmax = std::max(vmax, std::abs(vals[k]));
      nmax = std::max(nmax, noise[k]);
    }
    return std::make_pair(vmax, std::max(nmax, kTiny));
  };

  std::vector<double> roots;
  for (int j = 0; j <= n; ++j) {
    if (std::abs(vals[j]) == 0.0) roots.push_back(xs[j]);
  }

  for (int j = 0; j < n; ++j) {
    const auto [vmax, nmax] = local_stats(j);
    if (vmax < config.noise_factor * nmax) continue;  // unresolved stretch
    const double re0 = vals[j].real(), re1 = vals[j + 1].real();
    const double im0 = vals[j].imag(), im1 = vals[j + 1].imag();
    const bool re_change =
        re0 != 0.0 && re1 != 0.0 && std::signbit(re0) != std::signbit(re1);
    const bool im_change =
        im0 != 0.0 && im1 != 0.0 && std::signbit(im0) != std::signbit(im1);
    if (!re_change && !im_change) continue;
    // Follow the component with the larger swing across the bracket.
    const bool use_re =
        re_change && (!im_change || std::abs(re1 - re0) >= std::abs(im1 - im0));
    auto component = [&](double x) {
      const Cmplx v = g(x).first;
      return use_re ? v.real() : v.imag();
    };
    const double root =
        bisect_real(component, xs[j], xs[j + 1], use_re ? re0 : im0);
    // A genuine zero of the full complex function, not just of one component.
    if (std::abs(g(root).first) <= config.accept_rel * vmax) {
      roots.push_back(root);
    }
  }

  // Zeros sitting exactly on the interval ends produce no interior sign
  // change; accept them off the local peak instead.
  {
    const auto [vmax_lo, nmax_lo] = local_stats(0);
    if (vmax_lo >= config.noise_factor * nmax_lo &&
        std::abs(vals[0]) <= config.accept_rel * vmax_lo) {
      roots.push_back(lo);
    }
    const auto [vmax_hi, nmax_hi] = local_stats(n - 1);
    if (vmax_hi >= config.noise_factor * nmax_hi &&
        std::abs(vals[n]) <= config.accept_rel * vmax_hi) {
      roots.push_back(hi);
    }
  }

  sort_dedupe(roots, 1e-10 * std::max({1.0, std::abs(lo), std::abs(hi)}));
  return roots;
}

std::vector<double> det_alpha_zeros(const ModelParams& params,
                                    const CellGeometry& geometry, double E,
                                    SignBranch sign,
                                    const ComplexRootScan& config) {
  const double zone = M_PI / params.period();
  auto g = [&](double alpha) {
    return equilibrated_det(matching_matrix(params, geometry, E, alpha, sign));
  };
  return complex_zeros(g, 0.0, zone, config);
}

std::vector<double> det_energy_zeros(const ModelParams& params,
                                     const CellGeometry& geometry, double alpha,
                                     double e_min, double e_max,
                                     SignBranch sign,
                                     const ComplexRootScan& config) {
  if (!(e_min < e_max)) throw BadRange("energy window must satisfy lo < hi");
  if (params.kind == ModelKind::Barrier) {
    if (e_min < 0.0 || e_max > params.V) {
      throw BranchDomainViolation(
          "barrier-model energy window must lie inside [0, V]");
    }
  } else if (e_min < -params.V) {
    throw BranchDomainViolation(
        "well-model energy window must lie inside [-V, inf)");
  }
  auto g = [&](double E) {
    return equilibrated_det(matching_matrix(params, geometry, E, alpha, sign));
  };
  return complex_zeros(g, e_min, e_max, config);
}

std::vector<DispersionPoint> solve_alpha(const ModelParams& params, double E,
                                         const SolverConfig& config) {
  const double L = params.period();
  const double zone = M_PI / L;

  if (params.m1 == params.m2 && !config.force_scan) {
    // Equal masses make the relation alpha-free: invert the cosine directly.
    const double r = dispersion_rhs(params, E, 0.0);
    if (std::abs(r) > 1.0) return {};
    const double alpha = std::acos(r) / L;
    return {{E, alpha, std::cos(alpha * L) - r}};
  }

  auto f = [&](double alpha) {
    return std::cos(alpha * L) - dispersion_rhs(params, E, alpha);
  };
  const int n = std::max(config.scan_points, 16);
  std::vector<double> roots;
  double x_prev = 0.0;
  double f_prev = f(0.0);
  if (f_prev == 0.0) roots.push_back(0.0);
  for (int j = 1; j <= n; ++j) {
    const double x = zone * static_cast<double>(j) / n;
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
      roots.push_back(bisect_real(f, x_prev, x, f_prev));
    }
    x_prev = x;
    f_prev = fx;
  }
  sort_dedupe(roots, 1e-12 * std::max(1.0, zone));

  std::vector<DispersionPoint> points;
  points.reserve(roots.size());
  for (double alpha : roots) points.push_back({E, alpha, f(alpha)});
  return points;
}

}  // namespace kpx
