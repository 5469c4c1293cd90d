#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "optomech/commands.hpp"
#include "optomech/csv.hpp"
#include "optomech/report.hpp"
#include "optomech/svg.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("optomech_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "config.ini";
  std::ofstream out(path);
  out << body;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("defaults load without a file") {
  const RunConfig c = RunConfig::load("", {});
  CHECK(c.mode == RunMode::point);
  CHECK(c.kappa == 1e5);
  CHECK(c.params().gamma == 1.0);
  CHECK(c.params().g1 == 10.0 * 1e5);
  CHECK(c.filter().bandwidth == 1e5);
}

TEST_CASE("config file parsing with sections and comments") {
  const fs::path dir = temp_dir("parse");
  const std::string path = write_config(dir,
                                        "# comment\n"
                                        "mode = point\n"
                                        "[params]\n"
                                        "g1 = 12  ; trailing comment\n"
                                        "g2 = 3.5\n"
                                        "[filter]\n"
                                        "sigma = 0.5\n");
  const RunConfig c = RunConfig::load(path, {});
  CHECK(c.g1_ratio == 12.0);
  CHECK(c.g2_ratio == 3.5);
  CHECK(c.sigma_ratio == 0.5);
}

TEST_CASE("overrides win over the file") {
  const fs::path dir = temp_dir("override");
  const std::string path = write_config(dir, "[params]\ng1 = 12\n");
  const RunConfig c = RunConfig::load(path, {"params.g1=14", "filter.sigma=2"});
  CHECK(c.g1_ratio == 14.0);
  CHECK(c.sigma_ratio == 2.0);
}

TEST_CASE("unknown fields are rejected by name") {
  const fs::path dir = temp_dir("unknown");
  const std::string path = write_config(dir, "[params]\ncoupling = 3\n");
  CHECK_THROWS_WITH_AS(RunConfig::load(path, {}),
                       "unknown field 'params.coupling'", ConfigError);
}

TEST_CASE("malformed values name the offending field") {
  const fs::path dir = temp_dir("badvalue");
  const std::string path = write_config(dir, "[params]\ng1 = strong\n");
  try {
    RunConfig::load(path, {});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("params.g1") != std::string::npos);
  }
}

TEST_CASE("sections outside the mode are rejected") {
  const fs::path dir = temp_dir("section");
  const std::string path =
      write_config(dir, "mode = point\n[sweep]\nvariable = tau\n");
  CHECK_THROWS_AS(RunConfig::load(path, {}), ConfigError);
}

TEST_CASE("figure mode requires a known figure id") {
  CHECK_THROWS_AS(RunConfig::load("", {"mode=figure"}), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("", {"mode=figure", "figure_id=9z"}), ConfigError);
  CHECK_NOTHROW(RunConfig::load("", {"mode=figure", "figure_id=2c"}));
}

TEST_CASE("unphysical parameters surface as config errors") {
  CHECK_THROWS_AS(RunConfig::load("", {"params.kappa=-1"}), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("", {"filter.sigma=0"}), ConfigError);
}

TEST_CASE("serialization round-trips") {
  const RunConfig c = RunConfig::load(
      "", {"mode=sweep", "params.g1=11", "filter.sigma=0.25",
           "sweep.variable=omega_over_kappa", "sweep.lo=-2", "sweep.hi=2",
           "sweep.points=7", "sweep.coupling_rule=equal"});
  const fs::path dir = temp_dir("roundtrip");
  const std::string path = write_config(dir, c.serialize());
  const RunConfig back = RunConfig::load(path, {});
  CHECK(back.serialize() == c.serialize());
}

TEST_CASE("point dispatch: no parametric coupling means no entanglement") {
  const RunConfig c = RunConfig::load("", {"params.g2=0"});
  std::ostringstream out, err;
  CHECK(dispatch(c, out, err) == kExitOk);
  CHECK(out.str().find("E_N = 0") != std::string::npos);
}

TEST_CASE("point dispatch: unstable parameters exit with the instability code") {
  const RunConfig c = RunConfig::load("", {"params.g2=12"});  // g2 > g1
  std::ostringstream out, err;
  CHECK(dispatch(c, out, err) == kExitInstability);
  CHECK(err.str().find("unstable") != std::string::npos);
}

TEST_CASE("optimize dispatch: dead system exits with the numerical-failure code") {
  const RunConfig c = RunConfig::load(
      "", {"mode=optimize", "optimize.target=g2", "params.g1=1e-7"});
  std::ostringstream out, err;
  CHECK(dispatch(c, out, err) == kExitNumericalFailure);
}

TEST_CASE("json point report carries the full moment set") {
  const RunConfig c = RunConfig::load("", {"json=true", "params.g2=8"});
  std::ostringstream out, err;
  REQUIRE(dispatch(c, out, err) == kExitOk);
  const std::string s = out.str();
  for (const char* key : {"\"n1\"", "\"n2\"", "\"c12_abs\"", "\"m11_abs\"",
                          "\"x12_abs\"", "\"e_n\"", "\"nu_minus\"",
                          "\"closed_forms\""}) {
    CHECK_MESSAGE(s.find(key) != std::string::npos, "missing ", key);
  }
}

TEST_CASE("sweep dispatch writes a deterministic, round-trippable CSV") {
  const fs::path dir = temp_dir("sweepcsv");
  const RunConfig c = RunConfig::load(
      "", {"mode=sweep", "output=" + dir.string(), "sweep.variable=g2_over_g1",
           "sweep.lo=0.3", "sweep.hi=0.9", "sweep.points=5", "emit_svg=true"});
  std::ostringstream out, err;
  REQUIRE(dispatch(c, out, err) == kExitOk);

  const fs::path csv = dir / "sweep.csv";
  REQUIRE(fs::exists(csv));
  const std::string first = slurp(csv);

  // Header row present with the documented column order.
  CHECK(first.find("g2_over_g1,e_n,nu_minus,tau_kappa,c12_abs,n1,n2,stability") !=
        std::string::npos);

  // The comment block is the exact config: strip "# " and reload.
  std::istringstream lines(first);
  std::string line, echoed;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) == 0) echoed += line.substr(2) + "\n";
  }
  const fs::path echo_path = dir / "echo.ini";
  {
    std::ofstream eo(echo_path);
    eo << echoed;
  }
  const RunConfig back = RunConfig::load(echo_path.string(), {});
  CHECK(back.serialize() == c.serialize());

  // Byte-identical rerun.
  std::ostringstream out2, err2;
  REQUIRE(dispatch(c, out2, err2) == kExitOk);
  CHECK(slurp(csv) == first);

  // SVG written and well-formed enough to contain the chart skeleton.
  const std::string svg = slurp(dir / "sweep.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);
}

TEST_CASE("figure dispatch writes the figure CSV and SVG") {
  const fs::path dir = temp_dir("fig3a");
  RunConfig c = RunConfig::load(
      "", {"mode=figure", "figure_id=3a", "output=" + dir.string(),
           "emit_svg=true"});
  c.points = 15;  // keep the unit test fast
  std::ostringstream out, err;
  REQUIRE(dispatch(c, out, err) == kExitOk);
  const std::string csv = slurp(dir / "3a.csv");
  CHECK(csv.find("g2_over_g1,tau_formula_kappa,tau_numeric_kappa") != std::string::npos);
  int rows = 0;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#' && line.find("g2_over") != 0) ++rows;
  }
  CHECK(rows == 15);
  CHECK(slurp(dir / "3a.svg").find("<svg") != std::string::npos);

  // Rerun with the same config: byte-identical outputs.
  std::ostringstream out2, err2;
  REQUIRE(dispatch(c, out2, err2) == kExitOk);
  CHECK(slurp(dir / "3a.csv") == csv);
}

TEST_CASE("figure annotations mark precision-limited rows") {
  const fs::path dir = temp_dir("fig2c");
  RunConfig c = RunConfig::load(
      "", {"mode=figure", "figure_id=2c", "output=" + dir.string(), "workers=4"});
  c.points = 12;  // sparse grid still reaches the strong-drive tail
  std::ostringstream out, err;
  REQUIRE(dispatch(c, out, err) == kExitOk);
  const std::string csv = slurp(dir / "2c.csv");
  CHECK(csv.find(",annotations") != std::string::npos);
  CHECK(csv.find("resolution ceiling") != std::string::npos);
}

TEST_CASE("csv cells format NaN and full precision stably") {
  CHECK(format_full(0.1) == "0.10000000000000001");
  CHECK(format_full(std::nan("")) == "nan");
  CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, std::nan("")}};
  const std::string s = t.render("x");
  CHECK(s.find("1,nan") != std::string::npos);
}

TEST_CASE("svg chart renders axes, legend and dashes") {
  SvgChart chart("demo", "x", "y");
  chart.add_series("solid", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}, "#c02020", false);
  chart.add_series("dashed", {0.0, 1.0, 2.0}, {1.0, 0.2, 0.9}, "#2040c0", true);
  chart.add_hline("level", 0.75, "#209020");
  chart.add_marker("dot", 1.0, 0.5, "#209020");
  const std::string svg = chart.render();
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("text-anchor") != std::string::npos);
}

TEST_CASE("atomic writes leave no temp file behind") {
  const fs::path dir = temp_dir("atomic");
  const fs::path path = dir / "out.txt";
  write_file_atomic(path.string(), "payload");
  CHECK(slurp(path) == "payload");
  CHECK(!fs::exists(path.string() + ".tmp"));
}
