#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(KPX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "kpx_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli: help succeeds and a subcommand is required") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("--help").out.find("bands") != std::string::npos);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("bands --model martini").code == 2);
  CHECK(run_cli("bands --no-such-flag 1").code == 2);
}

TEST_CASE("cli: bands csv reports frozen edges and is byte-deterministic") {
  const std::string cmd = "bands --alpha-points 9 --e-points 600";
  const auto r1 = run_cli(cmd);
  REQUIRE(r1.code == 0);
  CHECK(r1.out.find("# band 0: branch=barrier_gap bottom=2.2484919922596") !=
        std::string::npos);
  CHECK(r1.out.find("top=8.7503024917513") != std::string::npos);
  CHECK(r1.out.find("alpha,band_index,E\n") != std::string::npos);
  const auto r2 = run_cli(cmd);
  CHECK(r1.out == r2.out);
}

TEST_CASE("cli: bands json parses and round-trips byte-identically") {
  const auto r = run_cli("bands --alpha-points 9 --e-points 600 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.contains("alphas"));
  REQUIRE(j.contains("bands"));
  CHECK(j["alphas"].size() == 9);
  REQUIRE(j["bands"].size() == 2);
  CHECK(j["bands"][0]["branch"] == "barrier_gap");
  CHECK(std::abs(j["bands"][0]["e_bottom"].get<double>() - 2.2484919922596048) <=
        1e-9);
  CHECK(std::abs(j["bands"][1]["e_top"].get<double>() - 8.7503024917513387) <=
        1e-9);
  CHECK(j["bands"][0]["points"].size() == 9);
  CHECK(j["bands"][0]["touches_above"] == false);
  // Parsing and re-serializing reproduces the emitted bytes exactly.
  CHECK(j.dump(2) + "\n" == r.out);
}

TEST_CASE("cli: well bands split the window at zero energy") {
  const auto r = run_cli(
      "bands --model well --V 3 --alpha-points 7 --e-points 400 "
      "--e-min -2.9 --e-max 4 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(!j["bands"].empty());
  bool saw_negative = false, saw_positive = false;
  int expect_index = 0;
  for (const auto& band : j["bands"]) {
    CHECK(band["band_index"].get<int>() == expect_index++);
    const std::string branch = band["branch"].get<std::string>();
    if (branch == "well_negative") {
      saw_negative = true;
      CHECK(band["e_top"].get<double>() <= 1e-9);
    } else {
      CHECK(branch == "well_positive");
      saw_positive = true;
      CHECK(band["e_bottom"].get<double>() >= -1e-9);
    }
  }
  CHECK(saw_negative);
  CHECK(saw_positive);
}

TEST_CASE("cli: wavefunc csv solves alpha from E and reports residuals") {
  const auto r = run_cli("wavefunc --E 2.3 --samples 21");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# E=2.2999999999999998") == 0);
  CHECK(r.out.find("x,re_u,im_u,re_psi,im_psi\n") != std::string::npos);
  int lines = 0;
  for (char c : r.out) lines += (c == '\n');
  CHECK(lines == 23);  // comment + header + 21 samples
}

TEST_CASE("cli: wavefunc distinguishes gap energies from bad usage") {
  CHECK(run_cli("wavefunc --E 5").code == 5);
  CHECK(run_cli("wavefunc --E 2.3 --alpha 0.9").code == 5);
  CHECK(run_cli("wavefunc --alpha 0.9").code == 2);
  CHECK(run_cli("wavefunc --E 2.3 --samples 1").code == 2);
  CHECK(run_cli("wavefunc --E 2.3 --normalize fancy").code == 2);
}

TEST_CASE("cli: wavefunc json carries small matching residuals") {
  const auto r = run_cli("wavefunc --E 2.3 --samples 11 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["E"].get<double>() - 2.3) <= 1e-12);
  for (const char* key :
       {"value_x2", "derivative_x2", "periodic_value", "periodic_derivative"}) {
    CHECK(j["residuals"][key].get<double>() <= 1e-10);
  }
  CHECK(j["samples"].size() == 11);
}

TEST_CASE("cli: dispersion emits the alpha-free form at equal masses") {
  const auto r = run_cli("dispersion --E 5");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("E,rhs\n") == 0);
  CHECK(r.out.find("-11.8308045993069") != std::string::npos);

  const auto grid = run_cli("dispersion --e-grid 1:9:5 --alpha 0.5");
  REQUIRE(grid.code == 0);
  CHECK(grid.out.find("E,alpha,rhs,residual\n") == 0);
  int lines = 0;
  for (char c : grid.out) lines += (c == '\n');
  CHECK(lines == 6);
}

TEST_CASE("cli: dispersion rejects inconsistent selections") {
  CHECK(run_cli("dispersion").code == 2);
  CHECK(run_cli("dispersion --E 5 --e-grid 1:9:5").code == 2);
  CHECK(run_cli("dispersion --e-grid 1:9:5 --alpha 0.3 --alpha-grid 0:1:3").code ==
        2);
  CHECK(run_cli("dispersion --m2 2 --E 5").code == 2);
  CHECK(run_cli("dispersion --e-grid 1:9").code == 2);
  CHECK(run_cli("dispersion --e-grid 9:1:5").code == 2);
  CHECK(run_cli("dispersion --E -3").code == 2);
}

TEST_CASE("cli: validate reports four passing suites and honors trials 0") {
  const auto r = run_cli("validate --trials 25 --seed 77");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["trials"] == 25);
  CHECK(j["passed"] == true);
  REQUIRE(j["suites"].size() == 4);
  for (const auto& s : j["suites"]) {
    CHECK(s["trials"].get<int>() == 25);
    CHECK(s["failures"].get<int>() == 0);
  }
  const auto r2 = run_cli("validate --trials 25 --seed 77");
  CHECK(r.out == r2.out);

  const auto empty = run_cli("validate --trials 0");
  REQUIRE(empty.code == 0);
  const json je = json::parse(empty.out);
  CHECK(je["passed"] == true);
  CHECK(je["suites"].empty());

  CHECK(run_cli("validate --trials -3").code == 2);
}

TEST_CASE("cli: config supplies defaults and explicit flags override it") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "well.json";
  write_file(cfg, R"({"model": "well", "V": 3})");
  const auto r = run_cli("dispersion --config " + cfg.string() + " --E 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("-0.52873755129956") != std::string::npos);

  const auto over =
      run_cli("dispersion --config " + cfg.string() + " --V 4 --E 1");
  REQUIRE(over.code == 0);
  CHECK(over.out.find("-0.52873755129956") == std::string::npos);

  const auto bad_type = dir / "bad_type.json";
  write_file(bad_type, R"({"V": "three"})");
  CHECK(run_cli("dispersion --config " + bad_type.string() + " --E 1").code == 2);

  const auto broken = dir / "broken.json";
  write_file(broken, "{oops");
  CHECK(run_cli("dispersion --config " + broken.string() + " --E 1").code == 3);
  CHECK(run_cli("dispersion --config " + (dir / "absent.json").string() +
                " --E 1")
            .code == 3);
}

TEST_CASE("cli: --out writes the same bytes that stdout would carry") {
  const auto dir = scratch_dir();
  const auto out_path = dir / "bands.json";
  fs::remove(out_path);
  const std::string base = "bands --alpha-points 5 --e-points 400 --format json";
  const auto to_file = run_cli(base + " --out " + out_path.string());
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  const auto to_stdout = run_cli(base);
  REQUIRE(to_stdout.code == 0);
  CHECK(read_file(out_path) == to_stdout.out);

  const auto missing = dir / "no_such_dir" / "out.csv";
  fs::remove_all(dir / "no_such_dir");
  CHECK(run_cli(base + " --out " + missing.string()).code == 3);
}

TEST_CASE("cli: invalid physical parameters exit with usage errors") {
  CHECK(run_cli("dispersion --V -1 --E 1").code == 2);
  CHECK(run_cli("dispersion --a 0 --b 0 --E 1").code == 2);
  CHECK(run_cli("bands --m1 -2 --alpha-points 5").code == 2);
}
