// CLI front end: run configuration, the six pipeline commands (flow,
// measures, derivative, scaling, monogamy, validate), and the argument/config
// parser.  Every command writes deterministic CSV or JSON tables under the
// configured output directory.
//
// Exit codes: 0 success, 1 internal consistency failure, 2 configuration
// error, 3 flow singularity, 4 insufficient fit data.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xyqrg/analysis.hpp"
#include "xyqrg/io.hpp"

namespace xyqrg {

enum class OutputFormat { Csv, Json };

struct RunConfig {
  double j0 = 1.0;
  double gamma_min = -1.0;
  double gamma_max = 1.0;
  int grid = 201;
  int steps = 4;
  double fd_step = 1e-4;
  std::vector<Measure> measures = default_measure_list();
  bool rho12 = true;
  bool rho23 = true;
  OutputFormat format = OutputFormat::Csv;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = available parallelism
  std::uint64_t seed = 12345;
  bool timings = false;  // real wall_time_ms instead of the deterministic 0
  DiscordOptions discord{};
};

// Empty when valid, otherwise one message per violated constraint.
std::vector<std::string> validate_config(const RunConfig& cfg);

// Uniform grid: ((n-1-i)*lo + i*hi)/(n-1), so symmetric ranges contain exact
// negation pairs and hit 0 exactly for odd n.
std::vector<double> gamma_grid(double lo, double hi, int n);

int cmd_flow(const RunConfig& cfg);
int cmd_measures(const RunConfig& cfg);
int cmd_derivative(const RunConfig& cfg);
int cmd_scaling(const RunConfig& cfg);
int cmd_monogamy(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

// In-memory builders shared by the commands and the determinism checks: the
// tables these return are exactly what cmd_* serializes.
Table build_flow_table(const RunConfig& cfg);
struct MeasuresTables {
  Table rows;
  Table report;  // dual-path disagreements
};
MeasuresTables build_measures_tables(const RunConfig& cfg);

// Full argument parser + dispatcher; argv follows main() conventions.
int run_cli(int argc, const char* const* argv);

}  // namespace xyqrg
