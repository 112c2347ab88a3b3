// Command-line driver: exit codes, output schemas, row counts and ordering,
// config-file handling, determinism across worker counts, and the IO layer's
// round-trip guarantees.
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "xyqrg/commands.hpp"
#include "xyqrg/io.hpp"

using namespace xyqrg;
using testsupport::fresh_temp_dir;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("xyqrg");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

Table load_csv(const std::filesystem::path& p) {
  return parse_csv(read_text_file(p));
}

int column_index(const Table& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& cell_str(const Table& t, size_t row, int col) {
  return std::get<std::string>(t.rows[row][static_cast<size_t>(col)]);
}

}  // namespace

TEST_CASE("help succeeds, config errors exit with 2") {
  CHECK(run({"--help"}) == 0);
  CHECK(run({}) == 2);             // a subcommand is required
  CHECK(run({"bogus"}) == 2);      // unknown subcommand
  const std::string out = (fresh_temp_dir("cli-rc") / "o").string();
  CHECK(run({"flow", "--grid", "1", "--out", out}) == 2);
  CHECK(run({"flow", "--j0", "0", "--out", out}) == 2);
  CHECK(run({"flow", "--steps", "13", "--out", out}) == 2);
  CHECK(run({"flow", "--gamma-min", "0.5", "--gamma-max", "-0.5", "--out", out}) == 2);
  CHECK(run({"measures", "--measures", "ne,bogus", "--out", out}) == 2);
  CHECK(run({"measures", "--state", "rho99", "--out", out}) == 2);
  CHECK(run({"measures", "--format", "yaml", "--out", out}) == 2);
  CHECK(run({"scaling", "--steps", "2", "--out", out}) == 2);
}

TEST_CASE("gamma grid endpoints and symmetry") {
  const std::vector<double> g = gamma_grid(-1.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == -1.0);
  CHECK(g[2] == 0.0);
  CHECK(g[4] == 1.0);
  CHECK(g[1] == -g[3]);
}

TEST_CASE("flow command: row counts, schema, and fixed-point column") {
  const auto dir = fresh_temp_dir("cli-flow");
  CHECK(run({"flow", "--grid", "5", "--steps", "2", "--out", dir.string()}) == 0);
  const Table t = load_csv(dir / "flow.csv");
  REQUIRE(t.columns.size() == 15);
  CHECK(t.columns[0] == "gamma0");
  CHECK(t.columns[1] == "qrg_step");
  CHECK(t.columns[2] == "j");
  CHECK(t.columns[3] == "gamma");
  CHECK(t.columns[4] == "g1");
  CHECK(t.columns[13] == "g10");
  CHECK(t.columns[14] == "n_sites");
  CHECK(t.rows.size() == 5 * 3);

  const int ci_g0 = column_index(t, "gamma0");
  const int ci_step = column_index(t, "qrg_step");
  const int ci_j = column_index(t, "j");
  const int ci_gamma = column_index(t, "gamma");
  const int ci_n = column_index(t, "n_sites");
  bool saw_isotropic_step1 = false;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    if (cell_str(t, r, ci_g0) == "0" && cell_str(t, r, ci_step) == "1") {
      saw_isotropic_step1 = true;
      CHECK(std::abs(parse_double(cell_str(t, r, ci_j)) - 0.375) < 1e-12);
      CHECK(std::abs(parse_double(cell_str(t, r, ci_gamma))) < 1e-12);
      CHECK(cell_str(t, r, ci_n) == "25");
    }
  }
  CHECK(saw_isotropic_step1);
}

TEST_CASE("flow json output carries the same schema") {
  const auto dir = fresh_temp_dir("cli-json");
  CHECK(run({"flow", "--grid", "3", "--steps", "1", "--format", "json",
             "--out", dir.string()}) == 0);
  const nlohmann::json doc =
      nlohmann::json::parse(read_text_file(dir / "flow.json"));
  CHECK(doc.at("schema").get<int>() == 1);
  REQUIRE(doc.at("rows").is_array());
  CHECK(doc.at("rows").size() == 3 * 2);
  const auto& row = doc.at("rows").at(0);
  CHECK(row.contains("gamma0"));
  CHECK(row.contains("j"));
  CHECK(row.contains("n_sites"));
}

TEST_CASE("measures command: counts, ordering, and quiet timings") {
  const auto dir = fresh_temp_dir("cli-meas");
  CHECK(run({"measures", "--grid", "3", "--steps", "1", "--measures", "ne,c",
             "--out", dir.string()}) == 0);
  const Table t = load_csv(dir / "measures.csv");
  REQUIRE(t.columns == std::vector<std::string>{"qrg_step", "gamma", "state",
                                                "measure", "value",
                                                "provenance", "wall_time_ms"});
  // (steps+1) x states x measures x grid
  CHECK(t.rows.size() == 2 * 2 * 2 * 3);

  const int ci_step = column_index(t, "qrg_step");
  const int ci_gamma = column_index(t, "gamma");
  const int ci_state = column_index(t, "state");
  const int ci_meas = column_index(t, "measure");
  const int ci_prov = column_index(t, "provenance");
  const int ci_wall = column_index(t, "wall_time_ms");
  using Key = std::tuple<int, std::string, std::string, double>;
  Key prev{-1, "", "", -2.0};
  for (size_t r = 0; r < t.rows.size(); ++r) {
    Key cur{std::stoi(cell_str(t, r, ci_step)), cell_str(t, r, ci_state),
            cell_str(t, r, ci_meas), parse_double(cell_str(t, r, ci_gamma))};
    CHECK(prev < cur);  // strictly increasing in the documented sort order
    prev = cur;
    CHECK_FALSE(cell_str(t, r, ci_prov).empty());
    CHECK(cell_str(t, r, ci_wall) == "0");  // timings suppressed by default
  }
}

TEST_CASE("measures determinism across worker counts") {
  const auto d1 = fresh_temp_dir("cli-det1");
  const auto d3 = fresh_temp_dir("cli-det3");
  const std::vector<std::string> base{"measures", "--grid", "5", "--steps",
                                      "1", "--gamma-min", "-0.8",
                                      "--gamma-max", "0.8"};
  std::vector<std::string> a1 = base, a3 = base;
  a1.insert(a1.end(), {"--jobs", "1", "--out", d1.string()});
  a3.insert(a3.end(), {"--jobs", "3", "--out", d3.string()});
  CHECK(run(a1) == 0);
  CHECK(run(a3) == 0);
  CHECK(read_text_file(d1 / "measures.csv") ==
        read_text_file(d3 / "measures.csv"));
  CHECK(read_text_file(d1 / "measures_report.csv") ==
        read_text_file(d3 / "measures_report.csv"));
}

TEST_CASE("derivative command: curve and extrema tables") {
  const auto dir = fresh_temp_dir("cli-deriv");
  CHECK(run({"derivative", "--grid", "5", "--steps", "1", "--measures", "ne",
             "--out", dir.string()}) == 0);
  const Table curves = load_csv(dir / "derivative.csv");
  REQUIRE(curves.columns ==
          std::vector<std::string>{"qrg_step", "gamma", "state", "measure",
                                   "dvalue", "singular", "fd_step"});
  CHECK(curves.rows.size() == 2 * 2 * 1 * 5);
  const int ci_sing = column_index(curves, "singular");
  const int ci_gamma = column_index(curves, "gamma");
  for (size_t r = 0; r < curves.rows.size(); ++r) {
    const bool singular = cell_str(curves, r, ci_sing) == "1";
    const double g = parse_double(cell_str(curves, r, ci_gamma));
    CHECK(singular == (std::abs(g) < 2e-4));
  }
  const Table ext = load_csv(dir / "derivative_extrema.csv");
  CHECK(ext.rows.size() == 2 * 2 * 1);
}

TEST_CASE("monogamy command row structure") {
  const auto dir = fresh_temp_dir("cli-mono");
  CHECK(run({"monogamy", "--grid", "3", "--steps", "1", "--out",
             dir.string()}) == 0);
  const Table t = load_csv(dir / "monogamy.csv");
  REQUIRE(t.columns ==
          std::vector<std::string>{"qrg_step", "gamma", "delta1", "delta2",
                                   "qd_delta1", "qd_delta2", "flags"});
  CHECK(t.rows.size() == 3 * 2);
  const int ci_flags = column_index(t, "flags");
  for (size_t r = 0; r < t.rows.size(); ++r)
    CHECK(cell_str(t, r, ci_flags) == "ok");
}

TEST_CASE("config file values are read and overridden by flags") {
  const auto dir = fresh_temp_dir("cli-cfg");
  const auto cfg = dir / "run.cfg";
  write_text_file(cfg, "grid=7\nsteps=1\n");
  const auto out1 = dir / "a";
  CHECK(run({"flow", "--config", cfg.string(), "--out", out1.string()}) == 0);
  CHECK(load_csv(out1 / "flow.csv").rows.size() == 7 * 2);

  const auto out2 = dir / "b";
  CHECK(run({"flow", "--config", cfg.string(), "--grid", "5", "--out",
             out2.string()}) == 0);
  CHECK(load_csv(out2 / "flow.csv").rows.size() == 5 * 2);
}

TEST_CASE("csv round-trips exactly through the parser") {
  const auto dir = fresh_temp_dir("cli-rt");
  CHECK(run({"flow", "--grid", "3", "--steps", "1", "--out", dir.string()}) == 0);
  const std::string text = read_text_file(dir / "flow.csv");
  CHECK(to_csv(parse_csv(text)) == text);
}

TEST_CASE("io primitives: shortest round-trip formatting and escaping") {
  for (double v : {0.1, -1.0, 0.375, 1e-9, 123456.789, 0.0}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.375) == "0.375");
  CHECK_THROWS_AS(parse_double("12x"), std::invalid_argument);

  Table t;
  t.columns = {"a", "b"};
  t.add_row({std::string("plain"), std::string("with,comma")});
  t.add_row({std::int64_t{4}, 0.5});
  const std::string csv = to_csv(t);
  CHECK(csv.find("\"with,comma\"") != std::string::npos);
  const Table back = parse_csv(csv);
  CHECK(back.rows.size() == 2);
  CHECK(std::get<std::string>(back.rows[0][1]) == "with,comma");
  CHECK_THROWS_AS(t.add_row({std::string("only-one")}), std::invalid_argument);
}

TEST_CASE("self-check command passes end to end") {
  const auto dir = fresh_temp_dir("cli-val");
  CHECK(run({"validate", "--out", dir.string()}) == 0);
  const Table t = load_csv(dir / "validate_report.csv");
  CHECK(t.rows.size() >= 8);
}
