#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbvar/sparse.hpp"

namespace gbvar {

/// Hyperparameters of one reproduction setting: post-selection (lambda, b_d,
/// h_n), plain Lasso lambda, and threshold-Lasso (lambda, b_d).
struct ReproductionSettings {
  double lambda = 0.0;
  double threshold = 0.0;
  double bandwidth = 0.0;
  double lasso_lambda = 0.0;
  double threshold_lasso_lambda = 0.0;
  double threshold_lasso_threshold = 0.0;
};

/// Reference settings for dgp1 / dgp2 / dgp3 at n = 1500, d = 80.
ReproductionSettings reproduction_settings(const std::string& dgp);

struct BenchConfig {
  std::string dgp = "dgp1";
  int n = 1500;
  int d = 80;
  int reps = 50;
  int replicates = 200;  // bootstrap B
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t burn_in = 1000;
  std::optional<double> lambda;
  std::optional<double> threshold;
  std::optional<double> bandwidth;
  bool baselines = true;  // also score plain and threshold Lasso
};

struct BenchReplicate {
  EstimationMetrics post_selection;
  EstimationMetrics lasso;
  EstimationMetrics threshold_lasso;
  bool covered = false;
  double critical_value = 0.0;
  double ci_length = 0.0;  // 2 c* / sqrt(n)
  bool lasso_converged = true;
  double max_kkt_violation = 0.0;
};

struct BenchRow {
  std::string dgp;
  std::string method;
  double r1 = 0.0;
  double r2 = 0.0;
  double kappa = 0.0;
  double kappa_zero_share = 0.0;  // fraction of replicates with kappa = 0
  std::optional<double> coverage;
  std::optional<double> ci_length;
  int reps = 0;
};

struct BenchReport {
  BenchConfig config;
  ReproductionSettings settings;
  std::vector<BenchReplicate> replicates;
  std::vector<BenchRow> rows;
  std::uint64_t estimator_evaluations = 0;  // fits + bootstrap replicates
  double wall_seconds = 0.0;
};

/// Monte Carlo harness: simulate, fit, bootstrap, score. Replicate r uses
/// seed derive_key(seed, r) for simulation and derive_key(that, 1) for the
/// bootstrap; replicates run in parallel and are stored by index.
BenchReport run_bench(const BenchConfig& config);

/// Header "dgp,method,reps,r1,r2,kappa,kappa_zero_share,coverage,ci_length"
/// (+ ",wall_seconds" when with_timing). Empty cells for undefined columns.
void write_bench_csv(const BenchReport& report, std::ostream& out, bool with_timing = false);

}  // namespace gbvar
