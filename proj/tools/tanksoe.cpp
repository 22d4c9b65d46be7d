// tanksoe command-line driver.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <tanksoe/tanksoe.hpp>

namespace fs = std::filesystem;
using namespace tanksoe;

namespace {

enum ExitCode { ok = 0, unexpected = 1, config_error = 2, steady_state_error = 3, bk_error = 4, numerical_error = 5 };

struct Run {
  std::string command;
  fs::path out;
  ModelParameters p;
  RunSettings r;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  fs::path file(const std::string& name) const { return out / name; }

  void manifest(const std::string& extra = "") const
  {
    std::ofstream m(file("manifest.txt"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m << "# tanksoe " << version << "\n";
    m << "# command: " << command << "\n";
    m << "# eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
    m << "# wall seconds: " << fmt12(secs) << "\n";
    if (!extra.empty()) m << "# " << extra << "\n";
    write_config(m, p, r);
  }
};

void write_irf(const fs::path& path, const ImpulseResponse& ir, std::uint64_t seed)
{
  CsvWriter w(path);
  w.comment("shock=" + ir.shock + " size=" + fmt12(ir.size_sigma) + " order=" + std::to_string(ir.order) +
            " seed=" + std::to_string(seed));
  std::vector<std::string> cols{"t"};
  cols.insert(cols.end(), ir.names.begin(), ir.names.end());
  w.header(cols);
  for (int t = 0; t < ir.horizon; ++t) {
    std::vector<double> row{static_cast<double>(t)};
    for (int v = 0; v < ir.reported.cols(); ++v) row.push_back(ir.reported(t, v));
    w.row(row);
  }
}

void write_grid(const fs::path& path, const PolicyGridResult& g)
{
  CsvWriter w(path);
  w.header({"tau_C", "phi_s", "feasible", "EV_R", "EV_H", "V0_R", "V0_H", "c_mean_R", "c_mean_H", "l_mean_R",
            "l_mean_H", "c_std_R", "c_std_H", "l_std_R", "l_std_H"});
  for (const auto& e : g.points) {
    w.row({e.point.tau_C, e.point.phi_s, e.feasible ? 1.0 : 0.0, e.welfare[0], e.welfare[1],
           e.welfare_conditional[0], e.welfare_conditional[1], e.c_mean[0], e.c_mean[1], e.l_mean[0],
           e.l_mean[1], e.c_std[0], e.c_std[1], e.l_std[0], e.l_std[1]});
    if (!e.feasible)
      std::cerr << "infeasible point tau_C=" << e.point.tau_C << " phi_s=" << e.point.phi_s << ": " << e.error
                << "\n";
  }
}

void write_table_rows(CsvWriter& w, const std::string& regime, const PolicyGridResult& g)
{
  const char* hh[2] = {"ricardian", "hand_to_mouth"};
  for (int j = 0; j < 2; ++j) {
    const auto& b = g.best(j);
    w.row_strings({regime, hh[j], fmt12(b.point.tau_C), fmt12(b.point.phi_s), fmt12(g.std_ratio_c(j)),
                   fmt12(g.std_ratio_l(j)), fmt12(g.mean_change_c(j)), fmt12(g.mean_change_l(j)),
                   fmt12(g.welfare_gain(j))});
  }
}

const std::vector<std::string> table_header = {"preferences", "household", "opt_tau_C", "opt_phi_s",
                                               "std_ratio_c", "std_ratio_l", "mean_change_c_pct",
                                               "mean_change_l_pct", "welfare_gain"};

void cmd_steady_state(Run& run)
{
  const auto ss = solve_steady_state(run.p);
  CsvWriter c(run.file("steady_state.csv"));
  c.header({"name", "value"});
  for (int i = 0; i < n_vars; ++i) c.labeled_row(std::string(var_names[i]), {ss.values[i]});
  const auto t = calibration_targets(ss);
  c.labeled_row("commodity_share_R", {t.share_R});
  c.labeled_row("commodity_share_H", {t.share_H});
  c.labeled_row("exports_gdp", {t.exports_gdp});
  c.labeled_row("commodity_export_share", {t.commodity_export_share});
  c.labeled_row("government_gdp", {t.gov_gdp});
  c.labeled_row("policy_rate_annual_pct", {100.0 * (std::pow(ss[var::Rd], 4.0) - 1.0)});
  c.labeled_row("residual_max", {ss.diag.residual_max});
  c.labeled_row("outer_pm", {ss[var::pm]});
  c.labeled_row("outer_iterations", {static_cast<double>(ss.diag.outer_iterations)});
  run.manifest("outer unknown: " + ss.diag.outer_unknown);
}

void cmd_irf(Run& run)
{
  const auto sol = solve_model(run.p, run.r.order, {true, 1e-5, 1e-7, worker_count()});
  const auto ir = impulse_response(sol, run.r.shock, run.r.size, run.r.horizon, run.r.order);
  write_irf(run.file("irf_" + run.r.shock + ".csv"), ir, run.r.seed);
  run.manifest();
}

void cmd_compare_irf(Run& run)
{
  ModelParameters b = run.p;
  b.phi_Co = 0.0;
  const auto c = compare_irf(run.p, b, run.r.shock, run.r.size, run.r.horizon, run.r.order,
                             {true, 1e-5, 1e-7, worker_count()});
  write_irf(run.file("irf_" + run.r.shock + "_benchmark.csv"), c.a, run.r.seed);
  write_irf(run.file("irf_" + run.r.shock + "_homothetic.csv"), c.b, run.r.seed);
  CsvWriter w(run.file("amplification_" + run.r.shock + ".csv"));
  w.header({"variable", "peak_benchmark", "peak_homothetic", "ratio"});
  for (int v = 0; v < n_vars; ++v)
    w.labeled_row(std::string(var_names[v]), {c.a.peak_abs(v), c.b.peak_abs(v), c.ratio[v]});
  run.manifest();
}

void cmd_moments(Run& run)
{
  const auto sol = solve_model(run.p, run.r.order, {true, 1e-5, 1e-7, worker_count()});
  const auto m = simulate_moments(Policy::of(sol, run.r.order), run.r.periods, run.r.burn_in, run.r.seed);
  CsvWriter w(run.file("moments.csv"));
  w.comment("order=" + std::to_string(m.order) + " periods=" + std::to_string(m.periods) +
            " burn_in=" + std::to_string(m.burn_in) + " seed=" + std::to_string(m.seed));
  w.header({"variable", "steady_state", "mean_dev", "std_dev", "mean_se", "std_se"});
  for (int v = 0; v < n_vars; ++v)
    w.labeled_row(m.names[v], {sol.ss[v], m.mean_dev(v), m.std_dev(v), m.mean_se(v), m.std_se(v)});
  run.manifest();
}

void fill_grids(RunSettings& r)
{
  if (r.grid_tau.empty()) r.grid_tau = default_tau_grid();
  if (r.grid_phis.empty()) r.grid_phis = default_phis_grid();
  for (double t : r.grid_tau)
    for (double f : r.grid_phis) {
      try {
        PolicyPoint(t, f);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("grid point out of bounds: ") + e.what());
      }
    }
}

void cmd_welfare_grid(Run& run)
{
  fill_grids(run.r);
  WelfareOptions o;
  o.conditional = run.r.conditional;
  const auto g = grid_search(run.p, run.r.grid_tau, run.r.grid_phis, o, worker_count(), run.r.refine);
  write_grid(run.file("welfare_grid.csv"), g);
  CsvWriter w(run.file("welfare_table.csv"));
  w.header(table_header);
  write_table_rows(w, run.p.phi_Co > 0 ? "non_homothetic" : "homothetic", g);
  run.manifest();
}

void cmd_homothetic_compare(Run& run)
{
  fill_grids(run.r);
  WelfareOptions o;
  o.conditional = run.r.conditional;
  const auto c = homotheticity_comparison(run.p, run.r.grid_tau, run.r.grid_phis, o, worker_count(), run.r.refine);
  write_grid(run.file("welfare_grid_non_homothetic.csv"), c.nonhomothetic);
  write_grid(run.file("welfare_grid_homothetic.csv"), c.homothetic);
  CsvWriter w(run.file("welfare_table.csv"));
  w.header(table_header);
  write_table_rows(w, "non_homothetic", c.nonhomothetic);
  write_table_rows(w, "homothetic", c.homothetic);
  CsvWriter gr(run.file("welfare_gain_ratio.csv"));
  gr.header({"household", "gain_ratio"});
  gr.labeled_row("ricardian", {c.gain_ratio[0]});
  gr.labeled_row("hand_to_mouth", {c.gain_ratio[1]});
  run.manifest();
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Two-agent small open economy: steady state, perturbation, IRFs and policy grids"};
  Run run;
  std::string config, out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> order, horizon;
  std::optional<std::string> shock, grid_tau, grid_phis;
  std::optional<double> size;
  app.add_option("command", run.command, "steady-state | irf | compare-irf | moments | welfare-grid | homothetic-compare")
      ->required()
      ->check(CLI::IsMember({"steady-state", "irf", "compare-irf", "moments", "welfare-grid", "homothetic-compare"}));
  app.add_option("--config", config, "flat key = value parameter file");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--order", order, "perturbation order")->check(CLI::IsMember({1, 2}));
  app.add_option("--shock", shock, "eps_P | eps_Rstar | eps_R | eps_C | eps_A");
  app.add_option("--size", size, "shock size in standard deviations");
  app.add_option("--horizon", horizon, "IRF horizon in quarters");
  app.add_option("--grid-tau", grid_tau, "comma-separated tau_C values");
  app.add_option("--grid-phis", grid_phis, "comma-separated phi_s values");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    if (!config.empty()) load_config_file(config, run.p, run.r);
    if (seed) run.r.seed = *seed;
    if (order) run.r.order = *order;
    if (shock) run.r.shock = *shock;
    if (size) run.r.size = *size;
    if (horizon) run.r.horizon = *horizon;
    if (grid_tau) run.r.grid_tau = parse_list("grid-tau", *grid_tau);
    if (grid_phis) run.r.grid_phis = parse_list("grid-phis", *grid_phis);
    if (run.r.order != 1 && run.r.order != 2) throw ConfigError("order must be 1 or 2");
    if (run.r.horizon < 1) throw ConfigError("horizon must be positive");
    if (find_shock(run.r.shock) < 0) throw ConfigError("unknown shock '" + run.r.shock + "'");
    validate(run.p);
    run.out = out;
    fs::create_directories(run.out);

    if (run.command == "steady-state") cmd_steady_state(run);
    else if (run.command == "irf") cmd_irf(run);
    else if (run.command == "compare-irf") cmd_compare_irf(run);
    else if (run.command == "moments") cmd_moments(run);
    else if (run.command == "welfare-grid") cmd_welfare_grid(run);
    else cmd_homothetic_compare(run);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const SteadyStateError& e) {
    std::cerr << "steady-state failure: " << e.what() << "\n";
    return steady_state_error;
  } catch (const BKError& e) {
    std::cerr << "Blanchard-Kahn failure: " << e.what() << "\n";
    return bk_error;
  } catch (const AllPointsInfeasible& e) {
    std::cerr << "policy grid failure: " << e.what() << "\n";
    return bk_error;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical_error;
  }
  return ok;
}
