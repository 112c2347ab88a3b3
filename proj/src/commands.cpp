#include "xyqrg/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "xyqrg/parallel.hpp"
#include "xyqrg/random_states.hpp"

namespace xyqrg {

namespace {

constexpr double kLn5 = 1.6094379124341003;

std::vector<PairKind> selected_states(const RunConfig& cfg) {
  std::vector<PairKind> kinds;
  if (cfg.rho12) kinds.push_back(PairKind::CenterCorner);
  if (cfg.rho23) kinds.push_back(PairKind::CornerCorner);
  return kinds;
}

// Emission order of the measure column: lexicographic in the measure id, so
// rows sorted by (step, state, measure, gamma) compare as plain strings.
std::vector<Measure> sorted_measures(const RunConfig& cfg) {
  std::vector<Measure> v = cfg.measures;
  std::sort(v.begin(), v.end(), [](Measure a, Measure b) {
    return std::string(measure_name(a)) < std::string(measure_name(b));
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& base) {
  const char* ext = cfg.format == OutputFormat::Csv ? ".csv" : ".json";
  return std::filesystem::path(cfg.out_dir) / (base + ext);
}

void emit_table(const RunConfig& cfg, const std::string& base,
                const Table& t) {
  const std::filesystem::path path = out_path(cfg, base);
  write_text_file(path,
                  cfg.format == OutputFormat::Csv ? to_csv(t) : to_json(t));
  std::cout << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
}

std::int64_t bool_cell(bool b) { return b ? 1 : 0; }

FlowTrace flow_or_rethrow(const RunConfig& cfg, double gamma0) {
  FlowTrace trace;
  try {
    trace = run_flow({cfg.j0, gamma0}, cfg.steps);
  } catch (const FlowSingularity& e) {
    throw FlowSingularity("gamma0=" + format_double(gamma0) + ": " + e.what());
  }
  if (static_cast<int>(trace.steps.size()) <= cfg.steps)
    throw FlowSingularity("gamma0=" + format_double(gamma0) +
                          ": flow produced a non-finite coupling at step " +
                          std::to_string(trace.steps.size()));
  return trace;
}

}  // namespace

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> errs;
  if (!std::isfinite(cfg.j0) || cfg.j0 == 0.0)
    errs.push_back("j0 must be finite and nonzero");
  if (!std::isfinite(cfg.gamma_min) || !std::isfinite(cfg.gamma_max) ||
      !(cfg.gamma_min < cfg.gamma_max))
    errs.push_back("gamma range must be finite with gamma-min < gamma-max");
  if (cfg.grid < 2) errs.push_back("grid must be >= 2");
  if (cfg.steps < 0 || cfg.steps > 12)
    errs.push_back("steps must lie in [0, 12]");
  if (!std::isfinite(cfg.fd_step) || cfg.fd_step <= 0.0)
    errs.push_back("fd-step must be finite and positive");
  if (cfg.jobs < 0) errs.push_back("jobs must be >= 0");
  if (cfg.measures.empty()) errs.push_back("at least one measure required");
  if (!cfg.rho12 && !cfg.rho23) errs.push_back("no state selected");
  if (cfg.out_dir.empty()) errs.push_back("output directory must be set");
  return errs;
}

std::vector<double> gamma_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = ((n - 1 - i) * lo + i * hi) / (n - 1);
  return g;
}

// ---------------------------------------------------------------------------
// flow
// ---------------------------------------------------------------------------

Table build_flow_table(const RunConfig& cfg) {
  const std::vector<double> g = gamma_grid(cfg.gamma_min, cfg.gamma_max,
                                           cfg.grid);
  std::vector<FlowTrace> traces(g.size());
  parallel_for(static_cast<long>(g.size()), cfg.jobs, [&](long i) {
    traces[static_cast<size_t>(i)] =
        flow_or_rethrow(cfg, g[static_cast<size_t>(i)]);
  });

  Table t;
  t.columns = {"gamma0", "qrg_step", "j", "gamma", "g1", "g2", "g3",
               "g4",     "g5",       "g6", "g7",   "g8", "g9", "g10",
               "n_sites"};
  for (size_t i = 0; i < g.size(); ++i) {
    for (const FlowStep& step : traces[i].steps) {
      std::vector<Cell> row;
      row.emplace_back(g[i]);
      row.emplace_back(static_cast<std::int64_t>(step.index));
      row.emplace_back(step.coupling.j);
      row.emplace_back(step.coupling.gamma);
      for (int k = 1; k <= 10; ++k) row.emplace_back(step.coeffs.g(k));
      row.emplace_back(step.n_sites);
      t.add_row(std::move(row));
    }
  }
  return t;
}

int cmd_flow(const RunConfig& cfg) {
  emit_table(cfg, "flow", build_flow_table(cfg));
  return 0;
}

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

MeasuresTables build_measures_tables(const RunConfig& cfg) {
  const std::vector<double> g = gamma_grid(cfg.gamma_min, cfg.gamma_max,
                                           cfg.grid);
  const std::vector<PairKind> kinds = selected_states(cfg);
  const size_t per = static_cast<size_t>(cfg.steps + 1) * kinds.size();
  std::vector<MeasurePanel> panels(g.size() * per);

  parallel_for(static_cast<long>(g.size()), cfg.jobs, [&](long li) {
    const size_t i = static_cast<size_t>(li);
    const FlowTrace trace = flow_or_rethrow(cfg, g[i]);
    for (int step = 0; step <= cfg.steps; ++step)
      for (size_t ki = 0; ki < kinds.size(); ++ki)
        panels[i * per + static_cast<size_t>(step) * kinds.size() + ki] =
            panel(trace.steps[static_cast<size_t>(step)].coeffs, kinds[ki],
                  cfg.discord);
  });

  MeasuresTables out;
  out.rows.columns = {"qrg_step", "gamma",      "state",       "measure",
                      "value",    "provenance", "wall_time_ms"};
  out.report.columns = {"qrg_step", "gamma",       "state",     "measure",
                        "value",    "check_value", "abs_delta", "tolerance"};
  const std::vector<Measure> measures = sorted_measures(cfg);
  for (int step = 0; step <= cfg.steps; ++step) {
    for (size_t ki = 0; ki < kinds.size(); ++ki) {
      const std::string state = pair_name(kinds[ki]);
      for (Measure m : measures) {
        for (size_t i = 0; i < g.size(); ++i) {
          const PanelEntry& e =
              panels[i * per + static_cast<size_t>(step) * kinds.size() + ki]
                  .at(m);
          out.rows.add_row({static_cast<std::int64_t>(step), g[i], state,
                            std::string(measure_name(m)), e.value,
                            std::string(provenance_name(e.provenance,
                                                        e.degraded)),
                            cfg.timings ? e.wall_ms : 0.0});
          if (e.dual_checked && e.dual_delta > e.dual_tolerance)
            out.report.add_row({static_cast<std::int64_t>(step), g[i], state,
                                std::string(measure_name(m)), e.value,
                                e.check_value, e.dual_delta,
                                e.dual_tolerance});
        }
      }
    }
  }
  return out;
}

int cmd_measures(const RunConfig& cfg) {
  const MeasuresTables tables = build_measures_tables(cfg);
  emit_table(cfg, "measures", tables.rows);
  emit_table(cfg, "measures_report", tables.report);
  return 0;
}

// ---------------------------------------------------------------------------
// derivative
// ---------------------------------------------------------------------------

int cmd_derivative(const RunConfig& cfg) {
  const std::vector<double> g = gamma_grid(cfg.gamma_min, cfg.gamma_max,
                                           cfg.grid);
  const std::vector<PairKind> kinds = selected_states(cfg);
  const std::vector<Measure> measures = sorted_measures(cfg);
  const EvalContext ctx{cfg.j0, cfg.discord};

  struct CurveSpec {
    int step;
    PairKind kind;
    Measure m;
  };
  std::vector<CurveSpec> specs;
  for (int step = 0; step <= cfg.steps; ++step)
    for (PairKind kind : kinds)
      for (Measure m : measures) specs.push_back({step, kind, m});

  std::vector<DerivativeCurve> curves(specs.size());
  std::vector<ExtremumResult> extrema(specs.size());
  parallel_for(static_cast<long>(specs.size()), cfg.jobs, [&](long li) {
    const CurveSpec& sp = specs[static_cast<size_t>(li)];
    curves[static_cast<size_t>(li)] =
        derivative_curve(sp.m, sp.kind, sp.step, g, cfg.fd_step, ctx);
    extrema[static_cast<size_t>(li)] =
        extremum(curves[static_cast<size_t>(li)], ctx);
  });

  Table rows;
  rows.columns = {"qrg_step", "gamma",    "state",  "measure",
                  "dvalue",   "singular", "fd_step"};
  Table ext;
  ext.columns = {"qrg_step",  "state",     "measure",
                 "gamma_max", "value_max", "bracketed_max",
                 "gamma_min", "value_min", "bracketed_min",
                 "fd_step"};
  for (size_t c = 0; c < specs.size(); ++c) {
    const CurveSpec& sp = specs[c];
    const DerivativeCurve& curve = curves[c];
    const std::string state = pair_name(sp.kind);
    for (size_t i = 0; i < curve.gamma.size(); ++i)
      rows.add_row({static_cast<std::int64_t>(sp.step), curve.gamma[i], state,
                    std::string(measure_name(sp.m)), curve.value[i],
                    bool_cell(curve.singular[i]), curve.fd_step});
    const ExtremumResult& e = extrema[c];
    ext.add_row({static_cast<std::int64_t>(sp.step), state,
                 std::string(measure_name(sp.m)), e.gamma_max, e.value_max,
                 bool_cell(e.bracketed_max), e.gamma_min, e.value_min,
                 bool_cell(e.bracketed_min), e.fd_step});
  }
  emit_table(cfg, "derivative", rows);
  emit_table(cfg, "derivative_extrema", ext);
  return 0;
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

int cmd_scaling(const RunConfig& cfg) {
  if (cfg.steps < 3) {
    std::cerr << "scaling requires steps >= 3\n";
    return 2;
  }
  const std::vector<PairKind> kinds = selected_states(cfg);
  const std::vector<Measure> measures = sorted_measures(cfg);
  const EvalContext ctx{cfg.j0, cfg.discord};

  struct TaskSpec {
    PairKind kind;
    Measure m;
    int step;
  };
  std::vector<TaskSpec> tasks;
  for (PairKind kind : kinds)
    for (Measure m : measures)
      for (int step = 1; step <= cfg.steps; ++step)
        tasks.push_back({kind, m, step});

  std::vector<ExtremumResult> results(tasks.size());
  parallel_for(static_cast<long>(tasks.size()), cfg.jobs, [&](long li) {
    const TaskSpec& tsk = tasks[static_cast<size_t>(li)];
    results[static_cast<size_t>(li)] =
        extremum_adaptive(tsk.m, tsk.kind, tsk.step, cfg.fd_step, ctx);
  });

  Table fits;
  fits.columns = {"state", "measure", "theta", "intercept", "r2", "n_points"};
  Table pts;
  pts.columns = {"state",      "measure",        "qrg_step", "n_sites",
                 "gamma_peak", "extremum_value", "log_n",    "log_amp",
                 "fd_step",    "finite"};
  bool insufficient = false;
  size_t ti = 0;
  for (PairKind kind : kinds) {
    const std::string state = pair_name(kind);
    for (Measure m : measures) {
      std::vector<ScalingPoint> points;
      for (int step = 1; step <= cfg.steps; ++step, ++ti) {
        const ExtremumResult& e = results[ti];
        ScalingPoint p;
        p.step = step;
        p.log_n = (step + 1) * kLn5;
        const double amp_max = std::abs(e.value_max);
        const double amp_min = std::abs(e.value_min);
        const bool max_side = amp_max >= amp_min;
        const double amp = max_side ? amp_max : amp_min;
        p.gamma_peak = max_side ? e.gamma_max : e.gamma_min;
        p.fd_step = e.fd_step;
        p.finite = std::isfinite(amp) && amp > 0.0;
        p.log_amp = p.finite ? std::log(amp)
                             : std::numeric_limits<double>::quiet_NaN();
        points.push_back(p);
        pts.add_row({state, std::string(measure_name(m)),
                     static_cast<std::int64_t>(step), effective_sites(step),
                     p.gamma_peak,
                     max_side ? e.value_max : e.value_min, p.log_n, p.log_amp,
                     p.fd_step, bool_cell(p.finite)});
      }
      try {
        const ScalingFit fit = scaling_fit(points);
        fits.add_row({state, std::string(measure_name(m)), fit.slope,
                      fit.intercept, fit.r2,
                      static_cast<std::int64_t>(fit.n_points)});
      } catch (const InsufficientData&) {
        insufficient = true;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::int64_t n_finite = 0;
        for (const ScalingPoint& p : points)
          if (p.finite) ++n_finite;
        fits.add_row({state, std::string(measure_name(m)), nan, nan, nan,
                      n_finite});
      }
    }
  }
  emit_table(cfg, "scaling", fits);
  emit_table(cfg, "scaling_points", pts);
  if (insufficient) {
    std::cerr << "scaling: a measure yielded fewer than 3 finite extrema\n";
    return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// monogamy
// ---------------------------------------------------------------------------

int cmd_monogamy(const RunConfig& cfg) {
  const std::vector<double> g = gamma_grid(cfg.gamma_min, cfg.gamma_max,
                                           cfg.grid);
  struct Row {
    MonogamyConcurrence conc;
    MonogamyDiscord disc;
  };
  const size_t per = static_cast<size_t>(cfg.steps + 1);
  std::vector<Row> results(g.size() * per);
  parallel_for(static_cast<long>(g.size()), cfg.jobs, [&](long li) {
    const size_t i = static_cast<size_t>(li);
    const FlowTrace trace = flow_or_rethrow(cfg, g[i]);
    for (int step = 0; step <= cfg.steps; ++step) {
      const DoubletCoefficients& d =
          trace.steps[static_cast<size_t>(step)].coeffs;
      Row& row = results[i * per + static_cast<size_t>(step)];
      row.conc = monogamy_concurrence(d);
      row.disc = monogamy_discord(d, cfg.discord);
    }
  });

  Table t;
  t.columns = {"qrg_step",  "gamma",     "delta1", "delta2",
               "qd_delta1", "qd_delta2", "flags"};
  for (int step = 0; step <= cfg.steps; ++step)
    for (size_t i = 0; i < g.size(); ++i) {
      const Row& row = results[i * per + static_cast<size_t>(step)];
      t.add_row({static_cast<std::int64_t>(step), g[i], row.conc.delta1,
                 row.conc.delta2, row.disc.delta1, row.disc.delta2,
                 std::string(row.disc.degraded ? "degraded" : "ok")});
    }
  emit_table(cfg, "monogamy", t);
  return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

namespace {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

template <typename F>
void run_check(std::vector<CheckResult>& out, const std::string& name,
               F&& body) {
  CheckResult r{name, true, ""};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  out.push_back(std::move(r));
}

}  // namespace

int cmd_validate(const RunConfig& cfg) {
  std::vector<CheckResult> checks;

  run_check(checks, "flow-fixed-points", [&](CheckResult& r) {
    double worst = 0.0;
    for (double g0 : {1.0, -1.0, 0.0}) {
      const CouplingPoint c{1.0, g0};
      const CouplingPoint next = renormalize_closed(c, extract_doublet(c));
      if (g0 == 0.0) {
        worst = std::max(worst, std::abs(next.gamma));
      } else {
        worst = std::max({worst, std::abs(next.gamma - g0),
                          std::abs(next.j - 1.0)});
      }
    }
    r.pass = worst <= 1e-12;
    r.detail = "max fixed-point drift " + format_double(worst);
  });

  run_check(checks, "flow-closed-vs-projector", [&](CheckResult& r) {
    double worst = 0.0;
    for (double g0 : {0.3, 0.5, 0.8}) {
      const CouplingPoint c{1.0, g0};
      const CouplingPoint a = renormalize_closed(c, extract_doublet(c));
      const CouplingPoint b = renormalize_projector(c);
      worst = std::max({worst, std::abs(a.j - b.j),
                        std::abs(a.gamma - b.gamma)});
    }
    r.pass = worst <= 1e-8;
    r.detail = "max |closed - projector| " + format_double(worst);
  });

  run_check(checks, "state-closed-vs-partial-trace", [&](CheckResult& r) {
    double worst = 0.0;
    for (double g0 : {0.2, 0.7}) {
      const FlowTrace trace = run_flow({1.0, g0}, 1);
      for (const FlowStep& step : trace.steps) {
        const auto diff12 = (rho12_closed(step.coeffs).rho.mat() -
                             pair_state(step.coeffs, 1, 2).rho.mat())
                                .cwiseAbs()
                                .maxCoeff();
        const auto diff23 = (rho23_closed(step.coeffs).rho.mat() -
                             pair_state(step.coeffs, 2, 3).rho.mat())
                                .cwiseAbs()
                                .maxCoeff();
        worst = std::max({worst, diff12, diff23});
      }
    }
    r.pass = worst <= 1e-10;
    r.detail = "max entrywise deviation " + format_double(worst);
  });

  run_check(checks, "panel-dual-paths", [&](CheckResult& r) {
    double worst_ratio = 0.0;
    std::string worst_what = "none";
    for (double g0 : {0.2, 0.6}) {
      const FlowTrace trace = run_flow({1.0, g0}, 1);
      for (const FlowStep& step : trace.steps)
        for (PairKind kind :
             {PairKind::CenterCorner, PairKind::CornerCorner}) {
          const MeasurePanel p = panel(step.coeffs, kind, cfg.discord);
          for (Measure m : all_measures()) {
            const PanelEntry& e = p.at(m);
            if (!e.dual_checked) continue;
            const double ratio = e.dual_delta / e.dual_tolerance;
            if (ratio > worst_ratio) {
              worst_ratio = ratio;
              worst_what = std::string(measure_name(m)) + " at gamma0=" +
                           format_double(g0) + " step " +
                           std::to_string(step.index);
            }
          }
        }
    }
    r.pass = worst_ratio <= 1.0;
    r.detail = "worst delta/tolerance " + format_double(worst_ratio) + " (" +
               worst_what + ")";
  });

  run_check(checks, "random-x-states", [&](CheckResult& r) {
    std::mt19937_64 rng(cfg.seed);
    double worst_dual = 0.0, worst_refine = 0.0;
    for (int i = 0; i < 200; ++i) {
      const DensityMatrix dm = random_x_state(rng, i % 2 == 0);
      const TwoQubitState s(dm);
      const MeasurePanel p = panel_generic(s, cfg.discord);
      if (auto why = panel_range_violation(p)) {
        r.pass = false;
        r.detail = "state " + std::to_string(i) + ": " + *why;
        return;
      }
      worst_dual = std::max(
          worst_dual, std::abs(p.at(Measure::Ne).value -
                               negativity_x_closed(s)));
      worst_dual = std::max(
          worst_dual, std::abs(p.at(Measure::Conc).value -
                               concurrence_x_closed(s)));
      const DiscordResult qd = quantum_discord(s, cfg.discord);
      if (qd.value > qd.grid_value + 1e-12) {
        r.pass = false;
        r.detail = "refined discord above grid value at state " +
                   std::to_string(i);
        return;
      }
      worst_refine = std::max(worst_refine, qd.grid_value - qd.value);
    }
    r.pass = worst_dual <= 1e-9 && worst_refine <= 1e-4;
    r.detail = "worst closed-vs-generic " + format_double(worst_dual) +
               ", worst grid-vs-refined " + format_double(worst_refine);
  });

  run_check(checks, "product-states", [&](CheckResult& r) {
    std::mt19937_64 rng(cfg.seed + 1);
    double worst = 0.0, worst_chsh = 0.0;
    for (int i = 0; i < 100; ++i) {
      const TwoQubitState s(random_product_state(rng));
      const MeasurePanel p = panel_generic(s, cfg.discord);
      for (Measure m : all_measures()) {
        if (m == Measure::Chsh)
          worst_chsh = std::max(worst_chsh, p.at(m).value);
        else
          worst = std::max(worst, p.at(m).value);
      }
    }
    r.pass = worst < 1e-8 && worst_chsh <= 2.0 + 1e-8;
    r.detail = "max correlation measure " + format_double(worst) +
               ", max chsh " + format_double(worst_chsh);
  });

  run_check(checks, "gamma-symmetry", [&](CheckResult& r) {
    const EvalContext ctx{1.0, cfg.discord};
    double worst = 0.0;
    for (Measure m : {Measure::Ne, Measure::Mid}) {
      for (int step = 0; step <= 2; ++step)
        for (double g0 : {0.1, 0.35})
          for (PairKind kind :
               {PairKind::CenterCorner, PairKind::CornerCorner}) {
            const double plus = measure_at(m, kind, g0, step, ctx);
            const double minus = measure_at(m, kind, -g0, step, ctx);
            worst = std::max(worst, std::abs(plus - minus));
          }
    }
    r.pass = worst <= 1e-9;
    r.detail = "max |Q(gamma) - Q(-gamma)| " + format_double(worst);
  });

  run_check(checks, "determinism-across-jobs", [&](CheckResult& r) {
    RunConfig small = cfg;
    small.grid = 21;
    small.steps = 1;
    small.timings = false;
    small.jobs = 1;
    const MeasuresTables a = build_measures_tables(small);
    small.jobs = 3;
    const MeasuresTables b = build_measures_tables(small);
    const bool same = to_csv(a.rows) == to_csv(b.rows) &&
                      to_csv(a.report) == to_csv(b.report) &&
                      to_json(a.rows) == to_json(b.rows);
    r.pass = same;
    r.detail = same ? "byte-identical across jobs=1 and jobs=3"
                    : "outputs differ across worker counts";
  });

  Table t;
  t.columns = {"check", "status", "detail"};
  bool all_pass = true;
  for (const CheckResult& c : checks) {
    all_pass = all_pass && c.pass;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
              << "\n";
    t.add_row({c.name, std::string(c.pass ? "pass" : "fail"), c.detail});
  }
  emit_table(cfg, "validate_report", t);
  std::cout << (all_pass ? "validate: all checks passed\n"
                         : "validate: FAILURES present\n");
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// argument parsing and dispatch
// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Quantum renormalization of the two-dimensional XY model on "
               "five-site blocks: coupling flows, correlation measures, "
               "derivative curves, scaling fits, and monogamy scores."};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> measure_ids;
  std::string state_sel = "both";
  std::string format_sel = "csv";

  app.set_config("--config", "", "key=value config file; flags override it");
  app.add_option("--j0", cfg.j0, "bare coupling J (nonzero)")
      ->capture_default_str();
  app.add_option("--gamma-min", cfg.gamma_min, "sweep lower bound")
      ->capture_default_str();
  app.add_option("--gamma-max", cfg.gamma_max, "sweep upper bound")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid, "number of gamma grid points (>= 2)")
      ->capture_default_str();
  app.add_option("--steps", cfg.steps, "QRG steps (0..12)")
      ->capture_default_str();
  app.add_option("--fd-step", cfg.fd_step,
                 "finite-difference step for derivatives")
      ->capture_default_str();
  app.add_option("--measures", measure_ids,
                 "subset of ne,qd,mid,min,gqd,chsh,c (default: all)")
      ->delimiter(',');
  app.add_option("--state", state_sel, "rho12, rho23, or both")
      ->check(CLI::IsMember({"rho12", "rho23", "both"}))
      ->capture_default_str();
  app.add_option("--format", format_sel, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs,
                 "worker threads (0 = available parallelism)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized property sweeps")
      ->capture_default_str();
  app.add_flag("--timings", cfg.timings,
               "emit real wall_time_ms (breaks byte determinism)");

  CLI::App* sub_flow = app.add_subcommand(
      "flow", "sweep gamma0 and record every renormalized coupling");
  CLI::App* sub_measures = app.add_subcommand(
      "measures", "evaluate the measure panel per grid point and step");
  CLI::App* sub_derivative = app.add_subcommand(
      "derivative", "finite-difference derivative curves and extrema");
  CLI::App* sub_scaling = app.add_subcommand(
      "scaling", "log-log fit of derivative extrema against system size");
  CLI::App* sub_monogamy = app.add_subcommand(
      "monogamy", "concurrence and discord monogamy scores on the block");
  CLI::App* sub_validate = app.add_subcommand(
      "validate", "dual-path agreement suite and discrepancy report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!measure_ids.empty() &&
      !(measure_ids.size() == 1 && measure_ids[0] == "all")) {
    std::set<Measure> chosen;
    for (const std::string& id : measure_ids) {
      const auto m = measure_from_name(id);
      if (!m) {
        std::cerr << "unknown measure id '" << id
                  << "' (valid: ne,qd,mid,min,gqd,chsh,c)\n";
        return 2;
      }
      chosen.insert(*m);
    }
    cfg.measures.assign(chosen.begin(), chosen.end());
  }
  cfg.rho12 = state_sel != "rho23";
  cfg.rho23 = state_sel != "rho12";
  cfg.format = format_sel == "json" ? OutputFormat::Json : OutputFormat::Csv;

  const std::vector<std::string> errs = validate_config(cfg);
  if (!errs.empty()) {
    for (const std::string& e : errs) std::cerr << "config error: " << e
                                                << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sub_flow)) return cmd_flow(cfg);
    if (app.got_subcommand(sub_measures)) return cmd_measures(cfg);
    if (app.got_subcommand(sub_derivative)) return cmd_derivative(cfg);
    if (app.got_subcommand(sub_scaling)) return cmd_scaling(cfg);
    if (app.got_subcommand(sub_monogamy)) return cmd_monogamy(cfg);
    if (app.got_subcommand(sub_validate)) return cmd_validate(cfg);
  } catch (const FlowSingularity& e) {
    std::cerr << "flow singularity: " << e.what() << "\n";
    return 3;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient fit data: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace xyqrg
