#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbvar/kernel.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/rng.hpp"
#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

struct BootstrapConfig {
  int replicates = 1000;   // B
  double alpha = 0.05;     // nominal level; coverage 1 - alpha
  double bandwidth = 0.0;  // h_n; 0 selects default_bandwidth(n)
  Kernel kernel = gaussian_kernel();
  std::uint64_t seed = 0;

  void validate() const;
};

/// n^{1/3}.
double default_bandwidth(std::size_t n);

/// Toeplitz matrix T_{st} = K((s - t) / h), s, t = 0..n-1.
Matrix kernel_toeplitz(std::size_t n, double bandwidth, const Kernel& kernel);

/// Gaussian multipliers e_1..e_n with E e_s e_t = K((s - t) / h).
/// Factorizes T once (lower Cholesky); if plain Cholesky fails, retries with
/// T + delta I for delta = 1e-14, 1e-13, ..., 1e-8 and records delta.
class MultiplierSampler {
 public:
  MultiplierSampler(std::size_t n, double bandwidth, const Kernel& kernel);

  std::size_t size() const { return n_; }
  double jitter() const { return jitter_; }
  const Matrix& factor() const { return factor_; }

  /// L z with z read from rng.
  Vector draw(CounterRng& rng) const;
  /// Columns b = first..first+count-1; column b uses stream derive_key(seed, b).
  Matrix draw_batch(std::uint64_t seed, std::size_t first, std::size_t count) const;

 private:
  std::size_t n_;
  double jitter_ = 0.0;
  Matrix factor_;
};

Vector correlated_normals(std::size_t n, double bandwidth, const Kernel& kernel, CounterRng& rng);

/// Theta_t = (X_{t+1} - Xbar)(X_t - Xbar)^T - A (X_t - Xbar)(X_t - Xbar)^T,
/// t = 1..n-1. Every Theta_t is rank one, r_t y_t^T with y_t = X_t - Xbar and
/// r_t = y_{t+1} - A y_t, so only the factors are stored.
struct SecondOrderResiduals {
  Matrix centered;  // n x d, row t = y_t
  Matrix residual;  // (n-1) x d, row t = r_t

  std::size_t size() const { return static_cast<std::size_t>(residual.rows()); }
  Matrix at(std::size_t t) const;
};

SecondOrderResiduals second_order_residuals(const BinaryPanel& panel, const Matrix& estimate);
SecondOrderResiduals second_order_residuals(const Matrix& data, const Matrix& estimate);

/// The bootstrap roots are linear in the multipliers:
///   Delta*_{ij} = n^{-1/2} sum_t e_t r_{t,i} (y_t^T Sigma0 F_{S_i}(Sigma0^T Sigma0))_j.
/// `weights` holds these coefficients, one column per selected entry.
struct RootProjection {
  std::vector<std::pair<int, int>> entries;  // selected (i, j), row-major order
  Matrix weights;                            // (n-1) x entries.size()
  std::size_t n = 0;
};

RootProjection root_projection(const SecondOrderResiduals& residuals, const PostSelectionFit& fit,
                               const LagCovariances& cov);

/// Roots for a batch of multiplier columns (n x B): returns B x entries. OpenMP over replicates.
Matrix bootstrap_roots(const RootProjection& projection, const Matrix& multipliers);

/// Serial reference taking the long way for each replicate: perturb Sigma1,
/// refit every row with the closed form, and difference against the fit.
Matrix bootstrap_roots_reference(const SecondOrderResiduals& residuals, const PostSelectionFit& fit,
                                 const LagCovariances& cov, const Matrix& multipliers,
                                 const std::vector<std::pair<int, int>>& entries);

/// Conditional covariance of the roots given the data,
///   E*[Delta*_a Delta*_b] = sum_{t1,t2} W_{t1,a} W_{t2,b} K((t1 - t2) / h).
Matrix analytic_root_covariance(const RootProjection& projection, double bandwidth, const Kernel& kernel);

struct BootstrapResult {
  int replicates = 0;
  double alpha = 0.05;
  double bandwidth = 0.0;
  std::string kernel;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<double> psi_stars;  // sorted ascending
  double critical_value = 0.0;    // c*_{1-alpha}
  double ci_halfwidth = 0.0;      // c* / sqrt(n)
  double jitter = 0.0;
};

/// psi_(k) with k = min{s : s / B >= 1 - alpha}; `sorted` ascending.
double critical_value(std::span<const double> sorted, double alpha);

/// Number of root evaluations performed by bootstrap_run (one per replicate),
/// process-wide. Used by the bench harness instrumentation.
std::uint64_t bootstrap_replicate_counter();

/// Second-order wild bootstrap of the post-selection estimator. The max over
/// (i, j) is taken over selected entries; the others are identically zero.
BootstrapResult bootstrap_run(const BinaryPanel& panel, const PostSelectionFit& fit, const LagCovariances& cov,
                              const BootstrapConfig& config);

/// Hypercube region tilde A_ij +/- c*/sqrt(n) for every entry.
struct ConfidenceRegion {
  Matrix center;
  Matrix lower;
  Matrix upper;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> selected;
  double critical_value = 0.0;
  double halfwidth = 0.0;
  std::size_t n = 0;

  /// max_ij sqrt(n) |tilde A_ij - A_ij| <= c*.
  bool contains(const Matrix& a) const;
};

ConfidenceRegion simultaneous_ci(const BootstrapResult& result, const PostSelectionFit& fit);

struct TestVerdict {
  bool reject = false;
  double statistic = 0.0;
  double critical_value = 0.0;
};

/// Rejects H0: A = null when max_ij sqrt(n) |tilde A_ij - null_ij| > c*.
TestVerdict hypothesis_test(const BootstrapResult& result, const PostSelectionFit& fit, const Matrix& null);

/// (1/n) sum_{t1,t2} K((t1 - t2) / h) X_{t1,i} X_{t2,j} for an n x m series
/// (not centered here). Lags whose kernel weight is exactly zero are skipped.
Matrix longrun_cov_estimate(const Matrix& series, double bandwidth, const Kernel& kernel);

}  // namespace gbvar
