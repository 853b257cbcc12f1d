#include "gbvar/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "gbvar/bootstrap.hpp"
#include "gbvar/error.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/rng.hpp"
#include "gbvar/serialize.hpp"
#include "gbvar/simulator.hpp"

namespace gbvar {

ReproductionSettings reproduction_settings(const std::string& dgp) {
  if (dgp == "dgp1") return {6.14e-6, 0.131, 2.333, 3.17e-5, 1.06e-5, 0.145};
  if (dgp == "dgp2") return {6.14e-6, 0.105, 3.368, 4.09e-5, 4.09e-5, 0.131};
  if (dgp == "dgp3") return {6.14e-6, 0.095, 2.421, 3.31e-5, 7.58e-6, 0.174};
  throw UnknownPreset(dgp);
}

namespace {

double max_kkt(const LagCovariances& cov, const Matrix& lasso, double lambda) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lasso.rows(); ++i)
    worst = std::max(worst, kkt_violation(cov.sigma1.row(i).transpose(), cov.sigma0, lasso.row(i).transpose(), lambda));
  return worst;
}

BenchRow summarize(const BenchReport& report, const std::string& method,
                   EstimationMetrics BenchReplicate::*field) {
  BenchRow row;
  row.dgp = report.config.dgp;
  row.method = method;
  row.reps = static_cast<int>(report.replicates.size());
  for (const BenchReplicate& rep : report.replicates) {
    const EstimationMetrics& m = rep.*field;
    row.r1 += m.r1;
    row.r2 += m.r2;
    row.kappa += m.kappa;
    row.kappa_zero_share += m.kappa == 0 ? 1.0 : 0.0;
  }
  const double reps = static_cast<double>(row.reps);
  row.r1 /= reps;
  row.r2 /= reps;
  row.kappa /= reps;
  row.kappa_zero_share /= reps;
  return row;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.reps < 1) throw InvalidArgument("reps must be >= 1");
  if (config.n < 2) throw PanelTooShort(static_cast<std::size_t>(std::max(config.n, 0)));
  const auto start = std::chrono::steady_clock::now();

  BenchReport report;
  report.config = config;
  report.settings = reproduction_settings(config.dgp);
  ReproductionSettings& s = report.settings;
  if (config.lambda) s.lambda = *config.lambda;
  if (config.threshold) s.threshold = *config.threshold;
  if (config.bandwidth) s.bandwidth = *config.bandwidth;

  const GbvarParams params = dgp_preset(config.dgp, config.d);
  const Matrix& truth = params.a();
  const double sqrt_n = std::sqrt(static_cast<double>(config.n));
  report.replicates.resize(static_cast<std::size_t>(config.reps));

  std::atomic<std::uint64_t> fits{0};
  const std::uint64_t replicates_before = bootstrap_replicate_counter();

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < config.reps; ++r) {
    const std::uint64_t rep_seed = CounterRng::derive_key(config.seed, static_cast<std::uint64_t>(r));
    SimConfig sim;
    sim.n = static_cast<std::size_t>(config.n);
    sim.burn_in = config.burn_in;
    sim.seed = rep_seed;
    const BinaryPanel panel = simulate(params, sim);
    const LagCovariances cov = sample_moments(panel);

    LassoConfig lasso;
    lasso.lambda = s.lambda;
    const PostSelectionFit fit = post_select_fit_serial(cov, lasso, s.threshold);
    fits.fetch_add(1);

    BootstrapConfig boot;
    boot.replicates = config.replicates;
    boot.alpha = config.alpha;
    boot.bandwidth = s.bandwidth;
    boot.seed = CounterRng::derive_key(rep_seed, 1);
    const BootstrapResult result = bootstrap_run(panel, fit, cov, boot);

    BenchReplicate& out = report.replicates[static_cast<std::size_t>(r)];
    out.post_selection = metrics(fit.estimate, truth);
    out.critical_value = result.critical_value;
    out.ci_length = 2.0 * result.critical_value / sqrt_n;
    out.covered = sqrt_n * (fit.estimate - truth).cwiseAbs().maxCoeff() <= result.critical_value;
    out.lasso_converged = fit.lasso_converged;
    out.max_kkt_violation = max_kkt(cov, fit.lasso, lasso.lambda);

    if (config.baselines) {
      LassoConfig plain;
      plain.lambda = s.lasso_lambda;
      const LassoFamily raw = lasso_rows_serial(cov, plain);
      out.lasso = metrics(raw.coef, truth, std::numeric_limits<double>::epsilon());
      out.max_kkt_violation = std::max(out.max_kkt_violation, max_kkt(cov, raw.coef, plain.lambda));
      LassoConfig thresholded;
      thresholded.lambda = s.threshold_lasso_lambda;
      const LassoFamily tl = lasso_rows_serial(cov, thresholded);
      out.threshold_lasso = metrics(threshold_lasso(tl.coef, s.threshold_lasso_threshold), truth);
      out.max_kkt_violation = std::max(out.max_kkt_violation, max_kkt(cov, tl.coef, thresholded.lambda));
      out.lasso_converged = out.lasso_converged && raw.all_converged() && tl.all_converged();
    }
  }

  report.estimator_evaluations = fits.load() + (bootstrap_replicate_counter() - replicates_before);

  BenchRow post = summarize(report, "post-selection", &BenchReplicate::post_selection);
  double covered = 0.0;
  double length = 0.0;
  for (const BenchReplicate& rep : report.replicates) {
    covered += rep.covered ? 1.0 : 0.0;
    length += rep.ci_length;
  }
  post.coverage = covered / config.reps;
  post.ci_length = length / config.reps;
  report.rows.push_back(post);
  if (config.baselines) {
    report.rows.push_back(summarize(report, "lasso", &BenchReplicate::lasso));
    report.rows.push_back(summarize(report, "threshold-lasso", &BenchReplicate::threshold_lasso));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_bench_csv(const BenchReport& report, std::ostream& out, bool with_timing) {
  out << "dgp,method,reps,r1,r2,kappa,kappa_zero_share,coverage,ci_length";
  if (with_timing) out << ",wall_seconds";
  out << '\n';
  for (const BenchRow& row : report.rows) {
    out << row.dgp << ',' << row.method << ',' << row.reps << ',' << format_real(row.r1) << ',' << format_real(row.r2)
        << ',' << format_real(row.kappa) << ',' << format_real(row.kappa_zero_share) << ','
        << (row.coverage ? format_real(*row.coverage) : "") << ','
        << (row.ci_length ? format_real(*row.ci_length) : "");
    if (with_timing) out << ',' << format_real(report.wall_seconds);
    out << '\n';
  }
}

}  // namespace gbvar
