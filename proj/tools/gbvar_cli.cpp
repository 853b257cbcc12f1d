// gbvar: simulate, fit, bootstrap, tune, bench and ingest binary VAR panels.
//
// Every subcommand also takes --config FILE.json whose keys are flag names
// without the leading dashes; flags given on the command line win.
// GBVAR_THREADS caps the OpenMP thread count.
// Exit codes: 0 ok, 2 user error, 3 numerical failure.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gbvar/bench.hpp"
#include "gbvar/bootstrap.hpp"
#include "gbvar/error.hpp"
#include "gbvar/ingest.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/panel_io.hpp"
#include "gbvar/serialize.hpp"
#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"
#include "gbvar/tuning.hpp"

namespace {

using namespace gbvar;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write " + path);
  return out;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string preset;
  std::string params_file;
  std::size_t n = 0;
  int d = 0;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string innovation = "independent";
  std::string correlation_file;
  std::string params_out;
};

int run_simulate(const SimulateArgs& a) {
  if (a.preset.empty() == a.params_file.empty()) throw InvalidArgument("give exactly one of --preset or --params");
  const GbvarParams params = a.preset.empty() ? params_from_json(load_json(a.params_file)) : dgp_preset(a.preset, a.d);
  SimConfig config;
  config.n = a.n;
  config.burn_in = a.burn_in;
  config.seed = a.seed;
  if (a.innovation == "gaussian-copula") {
    if (a.correlation_file.empty()) throw InvalidArgument("gaussian-copula needs --correlation");
    config.innovation = InnovationMode::gaussian_copula;
    config.correlation = matrix_from_json(load_json(a.correlation_file), "correlation");
  } else if (a.innovation != "independent") {
    throw InvalidArgument("unknown innovation mode '" + a.innovation + "'");
  }
  save_panel(simulate(params, config), a.out);
  if (!a.params_out.empty()) save_json(params_to_json(params), a.params_out);
  return 0;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
  std::string panel;
  double lambda = 0.0;
  double bd = 0.0;
  int max_iter = 100000;
  double tol = 1e-8;
  std::string out;
  std::string moments_out;
};

int run_fit(const FitArgs& a) {
  const BinaryPanel panel = load_panel(a.panel);
  const LagCovariances cov = sample_moments(panel);
  LassoConfig lasso;
  lasso.lambda = a.lambda;
  lasso.max_iter = a.max_iter;
  lasso.tol = a.tol;
  const PostSelectionFit fit = post_select_fit(cov, lasso, a.bd);
  if (!fit.lasso_converged) std::cerr << "warning: Lasso hit max_iter on some rows\n";
  Json j = fit_to_json(fit);
  const StationarityReport diag = stationarity_diagnostics(fit.estimate);
  j["diagnostics"] = {{"max_rowsum", diag.max_rowsum},
                      {"spectral_radius", diag.spectral_radius},
                      {"is_stationary", diag.is_stationary}};
  save_json(j, a.out);
  if (!a.moments_out.empty()) save_json(moments_to_json(cov), a.moments_out);
  return 0;
}

// --- bootstrap --------------------------------------------------------------

struct BootstrapArgs {
  std::string panel;
  std::string fit;
  int replicates = 1000;
  double alpha = 0.05;
  double bandwidth = 0.0;
  std::uint64_t seed = 0;
  std::string kernel = "gaussian";
  std::string out;
  std::string ci_out;
  std::string null_file;
};

int run_bootstrap(const BootstrapArgs& a) {
  const BinaryPanel panel = load_panel(a.panel);
  const PostSelectionFit fit = fit_from_json(load_json(a.fit));
  if (static_cast<std::size_t>(fit.dim()) != panel.d) throw ShapeMismatch("fit dimension differs from the panel");
  const LagCovariances cov = sample_moments(panel);
  BootstrapConfig config;
  config.replicates = a.replicates;
  config.alpha = a.alpha;
  config.bandwidth = a.bandwidth;
  config.seed = a.seed;
  config.kernel = kernel_by_name(a.kernel);
  const BootstrapResult result = bootstrap_run(panel, fit, cov, config);

  Json j = bootstrap_to_json(result);
  if (!a.null_file.empty()) {
    const Json null_json = load_json(a.null_file);
    // Either a bare matrix or a parameter document.
    const Matrix null = null_json.is_object() ? params_from_json(null_json).a() : matrix_from_json(null_json, "null");
    const TestVerdict verdict = hypothesis_test(result, fit, null);
    j["test"] = {{"statistic", verdict.statistic}, {"critical_value", verdict.critical_value}, {"reject", verdict.reject}};
  }
  save_json(j, a.out);
  if (!a.ci_out.empty()) {
    auto out = open_output(a.ci_out);
    write_region_csv(simultaneous_ci(result, fit), out);
  }
  return 0;
}

// --- tune -------------------------------------------------------------------

struct TuneArgs {
  std::string panel;
  std::string criterion = "tau2";
  double train_fraction = 0.75;
  std::vector<double> lambdas;
  std::vector<double> thresholds;
  std::string out;
  std::string selection_out;
};

int run_tune(const TuneArgs& a) {
  const BinaryPanel panel = load_panel(a.panel);
  TuneGrid grid = TuneGrid::defaults();
  if (!a.lambdas.empty()) grid.lambdas = a.lambdas;
  if (!a.thresholds.empty()) grid.thresholds = a.thresholds;
  grid.train_fraction = a.train_fraction;
  if (a.criterion == "tau1") {
    grid.criterion = TuneCriterion::tau1;
  } else if (a.criterion != "tau2") {
    throw InvalidArgument("criterion must be tau1 or tau2");
  }
  const TuneResult result = tune(panel, grid);
  if (!a.out.empty()) {
    auto out = open_output(a.out);
    write_score_table_csv(result, out);
  }
  const Json selection = {{"lambda", result.lambda},
                          {"b_d", result.threshold},
                          {"criterion", a.criterion},
                          {"score", result.score}};
  if (!a.selection_out.empty()) save_json(selection, a.selection_out);
  std::cout << selection.dump(2) << '\n';
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  BenchConfig config;
  std::optional<double> lambda;
  std::optional<double> bd;
  std::optional<double> bandwidth;
  bool no_baselines = false;
  bool with_timing = false;
  std::string out;
};

int run_bench_cmd(BenchArgs a) {
  a.config.lambda = a.lambda;
  a.config.threshold = a.bd;
  a.config.bandwidth = a.bandwidth;
  a.config.baselines = !a.no_baselines;
  const BenchReport report = run_bench(a.config);
  if (a.out.empty()) {
    write_bench_csv(report, std::cout, a.with_timing);
  } else {
    auto out = open_output(a.out);
    write_bench_csv(report, out, a.with_timing);
  }
  std::cerr << "bench: " << report.replicates.size() << " replicates, " << report.estimator_evaluations
            << " estimator evaluations, " << report.wall_seconds << " s\n";
  return 0;
}

// --- ingest -----------------------------------------------------------------

struct IngestArgs {
  std::string mode;
  double pct = 10.0;
  std::string input;
  std::string out;
};

int run_ingest(const IngestArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw UserError("cannot open " + a.input);
  const NumericTable table = read_numeric_csv(in);
  BinaryPanel panel;
  if (a.mode == "advance-decline") {
    panel = binarize_advance_decline(table);
  } else if (a.mode == "growth-threshold") {
    panel = binarize_growth(table, a.pct);
  } else {
    throw InvalidArgument("mode must be advance-decline or growth-threshold");
  }
  save_panel(panel, a.out);
  return 0;
}

// --- config file ------------------------------------------------------------

std::string json_scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_real(v.get<double>());
  throw FormatError("config values must be strings, numbers, booleans or arrays of those");
}

/// Builds argv with config-file flags inserted after the subcommand, skipping
/// any flag the user typed explicitly.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  for (std::size_t k = 1; k + 1 < args.size(); ++k)
    if (args[k] == "--config") config_path = args[k + 1];
  if (config_path.empty() || args.size() < 2) return args;

  std::set<std::string> explicit_flags;
  for (const auto& arg : args)
    if (arg.rfind("--", 0) == 0) explicit_flags.insert(arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2));

  const Json config = load_json(config_path);
  if (!config.is_object()) throw FormatError("config file must hold a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, value] : config.items()) {
    if (key == "config" || explicit_flags.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
    } else if (value.is_array()) {
      injected.push_back("--" + key);
      for (const Json& item : value) injected.push_back(json_scalar_text(item));
    } else {
      injected.push_back("--" + key);
      injected.push_back(json_scalar_text(value));
    }
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("GBVAR_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"Simulation, sparse estimation and bootstrap inference for binary vector autoregressions"};
  app.require_subcommand(1);
  std::string config_path;

  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file supplying flag values");
  };

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a panel from a preset or a parameter file");
  simulate_cmd->add_option("--preset", sim.preset, "dgp1 | dgp2 | dgp3 | example1 | random-graph");
  simulate_cmd->add_option("--params", sim.params_file, "Parameter JSON");
  simulate_cmd->add_option("--n", sim.n, "Output length")->required();
  simulate_cmd->add_option("--d", sim.d, "Dimension for DGP presets (0 = preset default)");
  simulate_cmd->add_option("--burn-in", sim.burn_in, "Discarded prefix length");
  simulate_cmd->add_option("--seed", sim.seed);
  simulate_cmd->add_option("--out", sim.out, "Panel file (.gbvp = binary, else CSV)")->required();
  simulate_cmd->add_option("--innovation", sim.innovation, "independent | gaussian-copula");
  simulate_cmd->add_option("--correlation", sim.correlation_file, "Copula correlation matrix JSON");
  simulate_cmd->add_option("--params-out", sim.params_out, "Write the parameters used as JSON");
  add_config(simulate_cmd);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Post-selection estimate of the transition matrix");
  fit_cmd->add_option("--panel", fit.panel)->required();
  fit_cmd->add_option("--lambda", fit.lambda, "Lasso penalty")->required();
  fit_cmd->add_option("--bd", fit.bd, "Support threshold b_d")->required();
  fit_cmd->add_option("--max-iter", fit.max_iter);
  fit_cmd->add_option("--tol", fit.tol);
  fit_cmd->add_option("--out", fit.out, "Fit JSON")->required();
  fit_cmd->add_option("--moments-out", fit.moments_out, "Sample moments JSON");
  add_config(fit_cmd);

  BootstrapArgs boot;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Second-order wild bootstrap confidence region and test");
  boot_cmd->add_option("--panel", boot.panel)->required();
  boot_cmd->add_option("--fit", boot.fit)->required();
  boot_cmd->add_option("--B,--replicates", boot.replicates, "Bootstrap replicates");
  boot_cmd->add_option("--alpha", boot.alpha, "Nominal level");
  boot_cmd->add_option("--bandwidth,--h-n", boot.bandwidth, "Kernel bandwidth h_n (default n^(1/3))");
  boot_cmd->add_option("--kernel", boot.kernel);
  boot_cmd->add_option("--seed", boot.seed);
  boot_cmd->add_option("--out", boot.out, "Result JSON")->required();
  boot_cmd->add_option("--ci-out", boot.ci_out, "Interval CSV");
  boot_cmd->add_option("--null", boot.null_file, "Null matrix (JSON rows or parameter document) to test");
  add_config(boot_cmd);

  TuneArgs tune_args;
  auto* tune_cmd = app.add_subcommand("tune", "Train/test selection of lambda and b_d");
  tune_cmd->add_option("--panel", tune_args.panel)->required();
  tune_cmd->add_option("--criterion", tune_args.criterion, "tau1 | tau2");
  tune_cmd->add_option("--train-fraction", tune_args.train_fraction);
  tune_cmd->add_option("--lambdas", tune_args.lambdas, "Lambda grid");
  tune_cmd->add_option("--thresholds", tune_args.thresholds, "b_d grid");
  tune_cmd->add_option("--out", tune_args.out, "Score table CSV");
  tune_cmd->add_option("--selection-out", tune_args.selection_out, "Selected pair JSON");
  add_config(tune_cmd);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo reproduction harness");
  bench_cmd->add_option("--dgp", bench.config.dgp, "dgp1 | dgp2 | dgp3");
  bench_cmd->add_option("--n", bench.config.n);
  bench_cmd->add_option("--d", bench.config.d);
  bench_cmd->add_option("--reps", bench.config.reps);
  bench_cmd->add_option("--B,--replicates", bench.config.replicates);
  bench_cmd->add_option("--alpha", bench.config.alpha);
  bench_cmd->add_option("--seed", bench.config.seed);
  bench_cmd->add_option("--burn-in", bench.config.burn_in);
  bench_cmd->add_option("--lambda", bench.lambda, "Override the reference lambda");
  bench_cmd->add_option("--bd", bench.bd, "Override the reference b_d");
  bench_cmd->add_option("--bandwidth,--h-n", bench.bandwidth, "Override the reference h_n");
  bench_cmd->add_flag("--no-baselines", bench.no_baselines, "Skip plain and threshold Lasso rows");
  bench_cmd->add_flag("--with-timing", bench.with_timing, "Append wall time (output no longer reproducible)");
  bench_cmd->add_option("--out", bench.out, "Report CSV (stdout if omitted)");
  add_config(bench_cmd);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Binarize a numeric CSV");
  ingest_cmd->add_option("--mode", ingest.mode, "advance-decline | growth-threshold")->required();
  ingest_cmd->add_option("--pct", ingest.pct, "Growth threshold in percent");
  ingest_cmd->add_option("--input", ingest.input)->required();
  ingest_cmd->add_option("--out", ingest.out)->required();
  add_config(ingest_cmd);

  try {
    std::vector<std::string> args = merge_config(argc, argv);
    std::vector<char*> raw;
    for (auto& s : args) raw.push_back(s.data());
    try {
      app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (simulate_cmd->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (boot_cmd->parsed()) return run_bootstrap(boot);
    if (tune_cmd->parsed()) return run_tune(tune_args);
    if (bench_cmd->parsed()) return run_bench_cmd(bench);
    if (ingest_cmd->parsed()) return run_ingest(ingest);
    return 2;
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: FormatError: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
