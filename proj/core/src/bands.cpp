#include "kpx/bands.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace kpx {

namespace {

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

// Localize a tangential zero (the function touches zero without changing
// sign) by bisecting a central difference of f; the difference step h trades
// cancellation noise against curvature bias and lands the root well inside
// 1e-9.
template <typename F>
std::optional<double> refine_touch(F&& f, double lo, double hi, double e_min,
                                   double e_max) {
  const double h = 3e-6 * std::max(1.0, std::abs(0.5 * (lo + hi)));
  const double lo2 = std::max(lo, e_min + h);
  const double hi2 = std::min(hi, e_max - h);
  if (!(lo2 < hi2)) return std::nullopt;
  auto slope = [&](double E) { return f(E + h) - f(E - h); };
  const double s_lo = slope(lo2);
  const double s_hi = slope(hi2);
  if (s_lo == 0.0) return lo2;
  if (s_hi == 0.0) return hi2;
  if (std::signbit(s_lo) == std::signbit(s_hi)) return std::nullopt;
  return bisect_real(slope, lo2, hi2, s_lo);
}

void check_window(const ModelParams& params, double e_min, double e_max) {
  if (!std::isfinite(e_min) || !std::isfinite(e_max)) {
    throw NonFinite("energy window");
  }
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
}

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

Window branch_window(const ModelParams& params, Branch branch,
                     const BandScanConfig& config) {
  Window w;
  if (config.e_min < config.e_max) {
    w.lo = config.e_min;
    w.hi = config.e_max;
  } else {
    switch (branch) {
      case Branch::BarrierGap:
        w = {0.0, params.V};
        break;
      case Branch::WellPositive:
        w = {0.0, 3.0 * params.V};
        break;
      case Branch::WellNegative:
        w = {-params.V * (1.0 - 1e-9), 0.0};
        break;
    }
  }
  check_window(params, w.lo, w.hi);
  // explicit windows must also respect the requested branch
  if (branch == Branch::WellPositive && w.lo < 0.0) {
    throw BranchDomainViolation("positive well branch window requires lo >= 0");
  }
  if (branch == Branch::WellNegative && w.hi > 0.0) {
    throw BranchDomainViolation("negative well branch window requires hi <= 0");
  }
  return w;
}

void check_branch_model(const ModelParams& params, Branch branch) {
  const bool ok = (params.kind == ModelKind::Barrier)
                      ? branch == Branch::BarrierGap
                      : (branch == Branch::WellPositive ||
                         branch == Branch::WellNegative);
  if (!ok) {
    throw BranchDomainViolation(
        "requested spectral branch does not belong to this model");
  }
}

// True when the dispersion relation has at least one reduced-zone solution at
// E.  With equal masses solve_alpha short-circuits to the closed form, so
// this predicate stays cheap in the common case.
bool has_solution(const ModelParams& params, double E,
                  const SolverConfig& solver) {
  return !solve_alpha(params, E, solver).empty();
}

// March from a known in-band energy toward `limit` until the band is left,
// then bisect the membership boundary; falls back to the window limit when
// the band extends all the way.
double refine_one_edge(const ModelParams& params, double inside_E,
                       double limit, double step, const SolverConfig& solver) {
  if (inside_E == limit) return limit;
  const double dir = (limit > inside_E) ? 1.0 : -1.0;
  double in_E = inside_E;
  double out_E = limit;
  bool found_outside = false;
  const int max_steps =
      static_cast<int>(std::ceil(std::abs(limit - inside_E) / step)) + 1;
  for (int j = 1; j <= max_steps; ++j) {
    double probe = inside_E + dir * step * j;
    bool at_limit = false;
    if ((dir > 0 && probe >= limit) || (dir < 0 && probe <= limit)) {
      probe = limit;
      at_limit = true;
    }
    if (!has_solution(params, probe, solver)) {
      out_E = probe;
      found_outside = true;
      break;
    }
    in_E = probe;
    if (at_limit) break;
  }
  if (!found_outside) return limit;

  double lo = std::min(in_E, out_E);
  double hi = std::max(in_E, out_E);
  bool lo_inside = (dir > 0);
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (has_solution(params, mid, solver) == lo_inside) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> energy_roots(const ModelParams& params, double alpha,
                                 double e_min, double e_max, int scan_points) {
  if (!std::isfinite(alpha)) throw NonFinite("alpha");
  check_window(params, e_min, e_max);
  const double cos_target = std::cos(alpha * params.period());
  auto f = [&](double E) { return cos_target - dispersion_rhs(params, E, alpha); };

  const int n = std::max(scan_points, 32);
  std::vector<double> es(n + 1), fs(n + 1);
  double f_scale = 0.0;
  for (int j = 0; j <= n; ++j) {
    es[j] = e_min + (e_max - e_min) * static_cast<double>(j) / n;
    fs[j] = f(es[j]);
    f_scale = std::max(f_scale, std::abs(fs[j]));
  }

  std::vector<double> roots;
  for (int j = 0; j <= n; ++j) {
    if (fs[j] == 0.0) roots.push_back(es[j]);
  }
  for (int j = 0; j < n; ++j) {
    if (fs[j] != 0.0 && fs[j + 1] != 0.0 &&
        std::signbit(fs[j]) != std::signbit(fs[j + 1])) {
      roots.push_back(bisect_real(f, es[j], es[j + 1], fs[j]));
    }
  }

  // Tangential zeros: the scan shows a same-sign dip instead of a crossing.
  const double touch_candidate = 1e-2 * std::max(1.0, f_scale);
  const double touch_accept = 1e-9 * std::max(1.0, f_scale);
  for (int j = 1; j < n; ++j) {
    if (fs[j] == 0.0) continue;
    if (std::abs(fs[j]) > touch_candidate) continue;
    if (std::abs(fs[j]) > std::abs(fs[j - 1]) ||
        std::abs(fs[j]) > std::abs(fs[j + 1])) {
      continue;
    }
    if (std::signbit(fs[j - 1]) != std::signbit(fs[j]) ||
        std::signbit(fs[j + 1]) != std::signbit(fs[j])) {
      continue;  // a crossing, already handled
    }
    const auto touched = refine_touch(f, es[j - 1], es[j + 1], e_min, e_max);
    if (touched && std::abs(f(*touched)) <= touch_accept) {
      roots.push_back(*touched);
    }
  }
  // A tangential zero can also sit on the window edge itself.
  if (fs[0] != 0.0 && std::abs(fs[0]) <= touch_accept) roots.push_back(es[0]);
  if (fs[n] != 0.0 && std::abs(fs[n]) <= touch_accept) roots.push_back(es[n]);

  std::sort(roots.begin(), roots.end());
  const double dedupe_tol = 1e-10 * std::max(1.0, e_max - e_min);
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || r - out.back() > dedupe_tol) out.push_back(r);
  }
  return out;
}

BandStructure band_structure(const ModelParams& params, Branch branch,
                             const BandScanConfig& config) {
  validate_params(params);
  check_branch_model(params, branch);
  const Window w = branch_window(params, branch, config);
  if (config.alpha_points < 2) throw BadRange("alpha_points must be >= 2");
  if (config.energy_points < 32) throw BadRange("energy_points must be >= 32");

  BandStructure structure;
  structure.branch = branch;
  const double zone = M_PI / params.period();
  const int na = config.alpha_points;
  structure.alphas.resize(na);
  for (int j = 0; j < na; ++j) {
    structure.alphas[j] = zone * static_cast<double>(j) / (na - 1);
  }

  const double step = (w.hi - w.lo) / config.energy_points;
  const double stitch_tol = 5.0 * step;

  struct OpenBand {
    std::vector<BandPoint> points;
    double last_E = 0.0;
  };
  std::vector<OpenBand> open;
  std::vector<std::vector<BandPoint>> finished;

  auto close_band = [&](OpenBand&& band) {
    finished.push_back(std::move(band.points));
  };

  for (int j = 0; j < na; ++j) {
    const std::vector<double> roots = energy_roots(
        params, structure.alphas[j], w.lo, w.hi, config.energy_points);
    std::vector<OpenBand> next;
    if (roots.size() == open.size()) {
      // Same count: pair off in energy order.
      for (std::size_t r = 0; r < roots.size(); ++r) {
        OpenBand band = std::move(open[r]);
        band.points.push_back({j, roots[r]});
        band.last_E = roots[r];
        next.push_back(std::move(band));
      }
    } else {
      // Count changed: greedy ordered matching within the stitch tolerance;
      // unmatched roots open new bands, unmatched bands close.
      std::size_t oi = 0, ri = 0;
      while (oi < open.size() && ri < roots.size()) {
        const double d = roots[ri] - open[oi].last_E;
        if (std::abs(d) <= stitch_tol) {
          OpenBand band = std::move(open[oi]);
          band.points.push_back({j, roots[ri]});
          band.last_E = roots[ri];
          next.push_back(std::move(band));
          ++oi;
          ++ri;
        } else if (d < 0.0) {
          OpenBand fresh;
          fresh.points.push_back({j, roots[ri]});
          fresh.last_E = roots[ri];
          next.push_back(std::move(fresh));
          ++ri;
        } else {
          close_band(std::move(open[oi]));
          ++oi;
        }
      }
      for (; ri < roots.size(); ++ri) {
        OpenBand fresh;
        fresh.points.push_back({j, roots[ri]});
        fresh.last_E = roots[ri];
        next.push_back(std::move(fresh));
      }
      for (; oi < open.size(); ++oi) close_band(std::move(open[oi]));
    }
    open = std::move(next);
  }
  for (auto& band : open) close_band(std::move(band));

  std::sort(finished.begin(), finished.end(),
            [](const auto& lhs, const auto& rhs) {
              const double lm =
                  std::min_element(lhs.begin(), lhs.end(),
                                   [](auto& p, auto& q) { return p.E < q.E; })
                      ->E;
              const double rm =
                  std::min_element(rhs.begin(), rhs.end(),
                                   [](auto& p, auto& q) { return p.E < q.E; })
                      ->E;
              return lm < rm;
            });

  for (auto& points : finished) {
    Band band;
    band.points = std::move(points);
    double grid_min = band.points.front().E;
    double grid_max = band.points.front().E;
    for (const BandPoint& p : band.points) {
      grid_min = std::min(grid_min, p.E);
      grid_max = std::max(grid_max, p.E);
    }
    band.e_bottom =
        refine_one_edge(params, grid_min, w.lo, step, config.solver);
    band.e_top = refine_one_edge(params, grid_max, w.hi, step, config.solver);
    structure.bands.push_back(std::move(band));
  }

  for (std::size_t i = 0; i + 1 < structure.bands.size(); ++i) {
    if (structure.bands[i + 1].e_bottom - structure.bands[i].e_top <
        kTouchTol) {
      structure.bands[i].touches_above = true;
      structure.bands[i + 1].touches_below = true;
    }
  }
  return structure;
}

BandEdges band_edges(const ModelParams& params, Branch branch,
                     double seed_energy, const BandScanConfig& config) {
  validate_params(params);
  check_branch_model(params, branch);
  if (!std::isfinite(seed_energy)) throw NonFinite("seed_energy");
  const Window w = branch_window(params, branch, config);
  if (seed_energy < w.lo || seed_energy > w.hi) {
    throw BadRange("seed energy lies outside the scan window");
  }
  if (!has_solution(params, seed_energy, config.solver)) {
    throw NoBandFound("seed energy lies in a spectral gap");
  }
  const double step = (w.hi - w.lo) / config.energy_points;
  BandEdges edges;
  edges.e_bottom =
      refine_one_edge(params, seed_energy, w.lo, step, config.solver);
  edges.e_top = refine_one_edge(params, seed_energy, w.hi, step, config.solver);
  return edges;
}

BandEdges band_edges(const ModelParams& params, const BandStructure& structure,
                     int band_index, const BandScanConfig& config) {
  (void)params;
  (void)config;
  if (band_index < 0 ||
      band_index >= static_cast<int>(structure.bands.size())) {
    throw BadRange("band index out of range");
  }
  const Band& band = structure.bands[static_cast<std::size_t>(band_index)];
  return {band.e_bottom, band.e_top};
}

}  // namespace kpx
