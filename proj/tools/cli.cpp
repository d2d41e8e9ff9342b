#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpx/bands.hpp"
#include "kpx/dispersion.hpp"
#include "kpx/errors.hpp"
#include "kpx/format.hpp"
#include "kpx/model.hpp"
#include "kpx/validation.hpp"
#include "kpx/wavefunction.hpp"

namespace kpx::cli {

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string model = "barrier";
  double a = 1.0;
  double b = 1.0;
  double V = 10.0;
  double m1 = 1.0;
  double m2 = 1.0;
  std::string cell = "kp1";
  double x2 = 0.0;
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 42;
};

struct BandsOpts {
  CommonOpts c;
  int alpha_points = 64;
  int e_points = 2000;
  double e_min = NAN;
  double e_max = NAN;
};

struct WavefuncOpts {
  CommonOpts c;
  double E = NAN;
  double alpha = NAN;
  double x_min = NAN;
  double x_max = NAN;
  int samples = 501;
  std::string normalize = "b-unit";
  std::string sign = "plus";
};

struct DispersionOpts {
  CommonOpts c;
  double E = NAN;
  double alpha = NAN;
  std::string e_grid;
  std::string alpha_grid;
};

struct ValidateOpts {
  CommonOpts c;
  int trials = 1000;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--model", o.model, "lattice model: barrier | well")
      ->check(CLI::IsMember({"barrier", "well"}))
      ->capture_default_str();
  sub->add_option("--a", o.a, "zero-potential slab width")
      ->capture_default_str();
  sub->add_option("--b", o.b, "barrier / well slab width")
      ->capture_default_str();
  sub->add_option("--V", o.V, "barrier height / well depth (> 0)")
      ->capture_default_str();
  sub->add_option("--m1", o.m1, "effective mass in region I")
      ->capture_default_str();
  sub->add_option("--m2", o.m2, "effective mass in region II")
      ->capture_default_str();
  sub->add_option("--cell", o.cell, "unit cell type: kp1 | kp2")
      ->check(CLI::IsMember({"kp1", "kp2"}))
      ->capture_default_str();
  sub->add_option("--x2", o.x2, "interior interface position of the cell")
      ->capture_default_str();
  sub->add_option("--config", o.config_path,
                  "JSON config file; explicit flags override it");
  sub->add_option("--out", o.out_path, "output path (default: stdout)");
  sub->add_option("--format", o.format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("config file is not valid JSON: " + std::string(e.what()));
  }
}

// Fill an option from the config file unless the flag was given explicitly.
template <typename T>
void merge_field(CLI::App* sub, const json* cfg, const std::string& flag,
                 const std::string& key, T& target) {
  if (cfg == nullptr) return;
  if (sub->count(flag) > 0) return;
  const auto it = cfg->find(key);
  if (it == cfg->end()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw BadRange("config field '" + key + "' has the wrong type");
  }
}

void merge_common(CLI::App* sub, const json* cfg, CommonOpts& o) {
  merge_field(sub, cfg, "--model", "model", o.model);
  merge_field(sub, cfg, "--a", "a", o.a);
  merge_field(sub, cfg, "--b", "b", o.b);
  merge_field(sub, cfg, "--V", "V", o.V);
  merge_field(sub, cfg, "--m1", "m1", o.m1);
  merge_field(sub, cfg, "--m2", "m2", o.m2);
  merge_field(sub, cfg, "--cell", "cell", o.cell);
  merge_field(sub, cfg, "--x2", "x2", o.x2);
  merge_field(sub, cfg, "--format", "format", o.format);
  merge_field(sub, cfg, "--seed", "seed", o.seed);
  merge_field(sub, cfg, "--out", "out", o.out_path);
}

ModelParams make_params(const CommonOpts& o) {
  ModelParams p;
  p.kind = (o.model == "well") ? ModelKind::Well : ModelKind::Barrier;
  p.a = o.a;
  p.b = o.b;
  p.V = o.V;
  p.m1 = o.m1;
  p.m2 = o.m2;
  validate_params(p);
  return p;
}

CellType make_cell(const CommonOpts& o) {
  return (o.cell == "kp2") ? CellType::KP2 : CellType::KP1;
}

const char* branch_name(Branch branch) {
  switch (branch) {
    case Branch::BarrierGap: return "barrier_gap";
    case Branch::WellPositive: return "well_positive";
    case Branch::WellNegative: return "well_negative";
  }
  return "unknown";
}

void emit(const CommonOpts& o, const std::string& content) {
  if (o.out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + o.out_path);
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing output file: " + o.out_path);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_grid(const std::string& spec, const char* what) {
  auto fail = [&]() -> std::vector<double> {
    throw BadRange(std::string(what) + " grid must have the form MIN:MAX:N");
  };
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) return fail();
  const std::string s_lo = spec.substr(0, c1);
  const std::string s_hi = spec.substr(c1 + 1, c2 - c1 - 1);
  const std::string s_n = spec.substr(c2 + 1);
  char* end = nullptr;
  const double lo = std::strtod(s_lo.c_str(), &end);
  if (end == s_lo.c_str() || *end != '\0') return fail();
  const double hi = std::strtod(s_hi.c_str(), &end);
  if (end == s_hi.c_str() || *end != '\0') return fail();
  const long n = std::strtol(s_n.c_str(), &end, 10);
  if (end == s_n.c_str() || *end != '\0' || n < 1) return fail();
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) return fail();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(lo);
  } else {
    for (long j = 0; j < n; ++j) {
      out.push_back(lo + (hi - lo) * static_cast<double>(j) /
                             static_cast<double>(n - 1));
    }
  }
  return out;
}

// ---- bands ----

int cmd_bands(CLI::App* sub, BandsOpts& o) {
  const json* cfg = nullptr;
  json cfg_data;
  if (sub->count("--config") > 0 || !o.c.config_path.empty()) {
    cfg_data = load_config(o.c.config_path);
    cfg = &cfg_data;
  }
  merge_common(sub, cfg, o.c);
  merge_field(sub, cfg, "--alpha-points", "alpha_points", o.alpha_points);
  merge_field(sub, cfg, "--e-points", "e_points", o.e_points);
  merge_field(sub, cfg, "--e-min", "e_min", o.e_min);
  merge_field(sub, cfg, "--e-max", "e_max", o.e_max);

  const ModelParams params = make_params(o.c);
  double e_min = o.e_min;
  double e_max = o.e_max;
  if (params.kind == ModelKind::Barrier) {
    if (std::isnan(e_min)) e_min = 0.0;
    if (std::isnan(e_max)) e_max = params.V;
  } else {
    if (std::isnan(e_min)) e_min = -params.V * (1.0 - 1e-9);
    if (std::isnan(e_max)) e_max = 3.0 * params.V;
  }
  if (!(e_min < e_max)) throw BadRange("--e-min must be below --e-max");

  BandScanConfig scan;
  scan.alpha_points = o.alpha_points;
  scan.energy_points = o.e_points;

  struct TaggedBand {
    Branch branch;
    Band band;
  };
  std::vector<double> alphas;
  std::vector<TaggedBand> bands;
  auto append_branch = [&](Branch branch, double lo, double hi) {
    BandScanConfig c2 = scan;
    c2.e_min = lo;
    c2.e_max = hi;
    BandStructure s = band_structure(params, branch, c2);
    if (alphas.empty()) alphas = s.alphas;
    for (Band& band : s.bands) bands.push_back({branch, std::move(band)});
  };
  if (params.kind == ModelKind::Barrier) {
    append_branch(Branch::BarrierGap, e_min, e_max);
  } else {
    const double neg_floor = -params.V * (1.0 - 1e-9);
    if (e_min < 0.0) {
      append_branch(Branch::WellNegative, std::max(e_min, neg_floor),
                    std::min(e_max, 0.0));
    }
    if (e_max > 0.0) {
      append_branch(Branch::WellPositive, std::max(e_min, 0.0), e_max);
    }
  }

  if (o.c.format == "json") {
    json j;
    j["alphas"] = json::array();
    for (double alpha : alphas) j["alphas"].push_back(alpha);
    j["bands"] = json::array();
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const TaggedBand& tb = bands[i];
      json jb;
      jb["band_index"] = static_cast<int>(i);
      jb["branch"] = branch_name(tb.branch);
      jb["e_bottom"] = tb.band.e_bottom;
      jb["e_top"] = tb.band.e_top;
      jb["touches_below"] = tb.band.touches_below;
      jb["touches_above"] = tb.band.touches_above;
      jb["points"] = json::array();
      for (const BandPoint& p : tb.band.points) {
        jb["points"].push_back(
            {{"alpha", alphas[static_cast<std::size_t>(p.alpha_index)]},
             {"E", p.E}});
      }
      j["bands"].push_back(std::move(jb));
    }
    emit(o.c, dump_json(j));
    return 0;
  }

  std::string out;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const TaggedBand& tb = bands[i];
    out += "# band " + std::to_string(i) + ": branch=" +
           branch_name(tb.branch) +
           " bottom=" + format_double(tb.band.e_bottom) +
           " top=" + format_double(tb.band.e_top) +
           " touches_below=" + (tb.band.touches_below ? "1" : "0") +
           " touches_above=" + (tb.band.touches_above ? "1" : "0") + "\n";
  }
  out += "alpha,band_index,E\n";
  struct Row {
    int alpha_index;
    int band_index;
    double E;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    for (const BandPoint& p : bands[i].band.points) {
      rows.push_back({p.alpha_index, static_cast<int>(i), p.E});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& lhs, const Row& rhs) {
    if (lhs.alpha_index != rhs.alpha_index) {
      return lhs.alpha_index < rhs.alpha_index;
    }
    return lhs.band_index < rhs.band_index;
  });
  for (const Row& r : rows) {
    out += format_double(alphas[static_cast<std::size_t>(r.alpha_index)]) +
           "," + std::to_string(r.band_index) + "," + format_double(r.E) +
           "\n";
  }
  emit(o.c, out);
  return 0;
}

// ---- wavefunc ----

int cmd_wavefunc(CLI::App* sub, WavefuncOpts& o) {
  const json* cfg = nullptr;
  json cfg_data;
  if (sub->count("--config") > 0 || !o.c.config_path.empty()) {
    cfg_data = load_config(o.c.config_path);
    cfg = &cfg_data;
  }
  merge_common(sub, cfg, o.c);
  merge_field(sub, cfg, "--E", "E", o.E);
  merge_field(sub, cfg, "--alpha", "alpha", o.alpha);
  merge_field(sub, cfg, "--x-min", "x_min", o.x_min);
  merge_field(sub, cfg, "--x-max", "x_max", o.x_max);
  merge_field(sub, cfg, "--samples", "samples", o.samples);
  merge_field(sub, cfg, "--normalize", "normalize", o.normalize);
  merge_field(sub, cfg, "--sign", "sign", o.sign);

  const ModelParams params = make_params(o.c);
  const CellGeometry geometry =
      CellGeometry::make(params, make_cell(o.c), o.c.x2);

  Normalization norm;
  if (o.normalize == "b-unit") {
    norm = Normalization::BUnit;
  } else if (o.normalize == "l2") {
    norm = Normalization::L2Cell;
  } else {
    throw BadRange("--normalize must be b-unit or l2");
  }
  SignBranch sign;
  if (o.sign == "plus") {
    sign = SignBranch::Plus;
  } else if (o.sign == "minus") {
    sign = SignBranch::Minus;
  } else {
    throw BadRange("--sign must be plus or minus");
  }

  if (std::isnan(o.E)) {
    throw BadRange("wavefunc requires --E (optionally together with --alpha)");
  }
  double alpha = o.alpha;
  if (std::isnan(alpha)) {
    const std::vector<DispersionPoint> points = solve_alpha(params, o.E);
    if (points.empty()) {
      throw NotOnDispersionLocus(
          "no reduced-zone solution at this energy (spectral gap)");
    }
    alpha = points.front().alpha;
  }

  const BlochState state =
      build_state(params, geometry, o.E, alpha, norm, sign);
  const double x_min = std::isnan(o.x_min) ? geometry.x1 : o.x_min;
  const double x_max =
      std::isnan(o.x_max) ? geometry.x1 + params.period() : o.x_max;
  const std::vector<WaveSample> samples =
      sample(state, x_min, x_max, o.samples);
  const MatchingResiduals res = matching_residuals(state);

  if (o.c.format == "json") {
    json j;
    j["E"] = state.E;
    j["alpha"] = state.alpha;
    j["residuals"] = {{"value_x2", res.value_x2},
                      {"derivative_x2", res.derivative_x2},
                      {"periodic_value", res.periodic_value},
                      {"periodic_derivative", res.periodic_derivative}};
    j["samples"] = json::array();
    for (const WaveSample& s : samples) {
      j["samples"].push_back({{"x", s.x},
                              {"re_u", s.u.real()},
                              {"im_u", s.u.imag()},
                              {"re_psi", s.psi.real()},
                              {"im_psi", s.psi.imag()}});
    }
    emit(o.c, dump_json(j));
    return 0;
  }

  std::string out;
  out += "# E=" + format_double(state.E) + " alpha=" +
         format_double(state.alpha) +
         " value_x2=" + format_double(res.value_x2) +
         " derivative_x2=" + format_double(res.derivative_x2) +
         " periodic_value=" + format_double(res.periodic_value) +
         " periodic_derivative=" + format_double(res.periodic_derivative) +
         "\n";
  out += "x,re_u,im_u,re_psi,im_psi\n";
  for (const WaveSample& s : samples) {
    out += format_double(s.x) + "," + format_double(s.u.real()) + "," +
           format_double(s.u.imag()) + "," + format_double(s.psi.real()) +
           "," + format_double(s.psi.imag()) + "\n";
  }
  emit(o.c, out);
  return 0;
}

// ---- dispersion ----

int cmd_dispersion(CLI::App* sub, DispersionOpts& o) {
  const json* cfg = nullptr;
  json cfg_data;
  if (sub->count("--config") > 0 || !o.c.config_path.empty()) {
    cfg_data = load_config(o.c.config_path);
    cfg = &cfg_data;
  }
  merge_common(sub, cfg, o.c);
  merge_field(sub, cfg, "--E", "E", o.E);
  merge_field(sub, cfg, "--alpha", "alpha", o.alpha);
  merge_field(sub, cfg, "--e-grid", "e_grid", o.e_grid);
  merge_field(sub, cfg, "--alpha-grid", "alpha_grid", o.alpha_grid);

  const ModelParams params = make_params(o.c);
  const bool has_e = !std::isnan(o.E);
  const bool has_e_grid = !o.e_grid.empty();
  const bool has_alpha = !std::isnan(o.alpha);
  const bool has_alpha_grid = !o.alpha_grid.empty();
  if (has_e == has_e_grid) {
    throw BadRange("provide exactly one of --E or --e-grid");
  }
  if (has_alpha && has_alpha_grid) {
    throw BadRange("provide at most one of --alpha or --alpha-grid");
  }

  const std::vector<double> energies =
      has_e ? std::vector<double>{o.E} : parse_grid(o.e_grid, "--e-grid");
  std::vector<double> alphas;
  if (has_alpha) {
    alphas = {o.alpha};
  } else if (has_alpha_grid) {
    alphas = parse_grid(o.alpha_grid, "--alpha-grid");
  }

  if (alphas.empty()) {
    // Equal masses make the relation alpha-free; emit the bare RHS.
    if (params.m1 != params.m2) {
      throw BadRange(
          "masses differ, so the relation depends on alpha: provide --alpha "
          "or --alpha-grid");
    }
    if (o.c.format == "json") {
      json j;
      j["rows"] = json::array();
      for (double E : energies) {
        j["rows"].push_back({{"E", E}, {"rhs", dispersion_rhs(params, E, 0.0)}});
      }
      emit(o.c, dump_json(j));
      return 0;
    }
    std::string out = "E,rhs\n";
    for (double E : energies) {
      out += format_double(E) + "," +
             format_double(dispersion_rhs(params, E, 0.0)) + "\n";
    }
    emit(o.c, out);
    return 0;
  }

  const double L = params.period();
  if (o.c.format == "json") {
    json j;
    j["rows"] = json::array();
    for (double E : energies) {
      for (double alpha : alphas) {
        const double rhs = dispersion_rhs(params, E, alpha);
        j["rows"].push_back({{"E", E},
                             {"alpha", alpha},
                             {"rhs", rhs},
                             {"residual", std::cos(alpha * L) - rhs}});
      }
    }
    emit(o.c, dump_json(j));
    return 0;
  }
  std::string out = "E,alpha,rhs,residual\n";
  for (double E : energies) {
    for (double alpha : alphas) {
      const double rhs = dispersion_rhs(params, E, alpha);
      out += format_double(E) + "," + format_double(alpha) + "," +
             format_double(rhs) + "," +
             format_double(std::cos(alpha * L) - rhs) + "\n";
    }
  }
  emit(o.c, out);
  return 0;
}

// ---- validate ----

int cmd_validate(CLI::App* sub, ValidateOpts& o) {
  const json* cfg = nullptr;
  json cfg_data;
  if (sub->count("--config") > 0 || !o.c.config_path.empty()) {
    cfg_data = load_config(o.c.config_path);
    cfg = &cfg_data;
  }
  merge_common(sub, cfg, o.c);
  merge_field(sub, cfg, "--trials", "trials", o.trials);
  if (o.trials < 0) throw BadRange("--trials must be >= 0");

  const ValidationReport report = run_validation(o.c.seed, o.trials);
  json j;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["passed"] = report.all_passed();
  j["suites"] = json::array();
  for (const SuiteResult& s : report.suites) {
    j["suites"].push_back({{"suite", s.suite},
                           {"trials", s.trials},
                           {"failures", s.failures},
                           {"worst_error", s.worst_error},
                           {"excluded", s.excluded}});
  }
  emit(o.c, dump_json(j));
  return report.all_passed() ? 0 : 1;
}

template <typename Body>
int run_guarded(Body&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 3;
  } catch (const NotOnDispersionLocus& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 5;
  } catch (const NonPositiveParameter& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 2;
  } catch (const NonFinite& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 2;
  } catch (const EnergyOutOfBranch& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 2;
  } catch (const BranchDomainViolation& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 2;
  } catch (const BadRange& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    // DegenerateDenominator, RankDeficiencyTooHigh, NoBandFound, ...
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kpx: error: %s\n", e.what());
    return 4;
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{
      "Band structure and Bloch states of one-dimensional superlattices "
      "with piecewise-constant potential and effective mass"};
  app.require_subcommand(1);

  BandsOpts bands_opts;
  CLI::App* bands_cmd = app.add_subcommand(
      "bands", "Scan the reduced zone and report allowed bands with edges");
  add_common(bands_cmd, bands_opts.c);
  bands_cmd->add_option("--alpha-points", bands_opts.alpha_points,
                        "reduced-zone grid size")
      ->capture_default_str();
  bands_cmd->add_option("--e-points", bands_opts.e_points,
                        "energy scan density per alpha")
      ->capture_default_str();
  bands_cmd->add_option("--e-min", bands_opts.e_min,
                        "energy window lower edge (default: branch window)");
  bands_cmd->add_option("--e-max", bands_opts.e_max,
                        "energy window upper edge (default: branch window)");

  WavefuncOpts wavefunc_opts;
  CLI::App* wavefunc_cmd = app.add_subcommand(
      "wavefunc", "Evaluate a Bloch state u(x) and psi(x) on a grid");
  add_common(wavefunc_cmd, wavefunc_opts.c);
  wavefunc_cmd->add_option("--E", wavefunc_opts.E, "state energy (required)");
  wavefunc_cmd->add_option(
      "--alpha", wavefunc_opts.alpha,
      "reduced wavevector; omitted: solved from the dispersion relation");
  wavefunc_cmd->add_option("--x-min", wavefunc_opts.x_min,
                           "sampling start (default: cell start)");
  wavefunc_cmd->add_option("--x-max", wavefunc_opts.x_max,
                           "sampling end (default: one period)");
  wavefunc_cmd->add_option("--samples", wavefunc_opts.samples,
                           "number of sample points")
      ->capture_default_str();
  wavefunc_cmd->add_option("--normalize", wavefunc_opts.normalize,
                           "normalization: b-unit | l2")
      ->check(CLI::IsMember({"b-unit", "l2"}))
      ->capture_default_str();
  wavefunc_cmd->add_option("--sign", wavefunc_opts.sign,
                           "negative-branch sign choice: plus | minus")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();

  DispersionOpts dispersion_opts;
  CLI::App* dispersion_cmd = app.add_subcommand(
      "dispersion", "Tabulate the dispersion right-hand side");
  add_common(dispersion_cmd, dispersion_opts.c);
  dispersion_cmd->add_option("--E", dispersion_opts.E, "single energy");
  dispersion_cmd->add_option("--e-grid", dispersion_opts.e_grid,
                             "energy grid MIN:MAX:N");
  dispersion_cmd->add_option("--alpha", dispersion_opts.alpha,
                             "single reduced wavevector");
  dispersion_cmd->add_option("--alpha-grid", dispersion_opts.alpha_grid,
                             "reduced wavevector grid MIN:MAX:N");

  ValidateOpts validate_opts;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Run randomized self-checks and emit a JSON report");
  add_common(validate_cmd, validate_opts.c);
  validate_cmd->add_option("--trials", validate_opts.trials,
                           "trials per suite (0 = empty report)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (bands_cmd->parsed()) {
    return run_guarded([&] { return cmd_bands(bands_cmd, bands_opts); });
  }
  if (wavefunc_cmd->parsed()) {
    return run_guarded(
        [&] { return cmd_wavefunc(wavefunc_cmd, wavefunc_opts); });
  }
  if (dispersion_cmd->parsed()) {
    return run_guarded(
        [&] { return cmd_dispersion(dispersion_cmd, dispersion_opts); });
  }
  if (validate_cmd->parsed()) {
    return run_guarded(
        [&] { return cmd_validate(validate_cmd, validate_opts); });
  }
  return 2;
}

}  // namespace kpx::cli
