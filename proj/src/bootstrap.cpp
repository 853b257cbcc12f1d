#include "gbvar/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "gbvar/error.hpp"

namespace gbvar {

namespace {

std::atomic<std::uint64_t> g_replicates{0};

constexpr std::size_t kReplicateChunk = 32;

}  // namespace

void BootstrapConfig::validate() const {
  if (replicates < 1) throw InvalidArgument("replicate count B must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidLevel(alpha);
  if (!(bandwidth >= 0.0) || !std::isfinite(bandwidth)) throw InvalidArgument("bandwidth must be > 0");
  if (!kernel.eval) throw InvalidArgument("kernel is empty");
}

double default_bandwidth(std::size_t n) { return std::cbrt(static_cast<double>(n)); }

Matrix kernel_toeplitz(std::size_t n, double bandwidth, const Kernel& kernel) {
  if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
  const auto size = static_cast<Eigen::Index>(n);
  Vector lag_weight(size);
  for (Eigen::Index lag = 0; lag < size; ++lag) lag_weight[lag] = kernel(static_cast<double>(lag) / bandwidth);
  Matrix t(size, size);
  for (Eigen::Index s = 0; s < size; ++s)
    for (Eigen::Index u = 0; u < size; ++u) t(s, u) = lag_weight[std::abs(s - u)];
  return t;
}

MultiplierSampler::MultiplierSampler(std::size_t n, double bandwidth, const Kernel& kernel) : n_(n) {
  Matrix t = kernel_toeplitz(n, bandwidth, kernel);
  const double ladder[] = {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
  for (double delta : ladder) {
    Eigen::LLT<Matrix> llt(t + delta * Matrix::Identity(t.rows(), t.cols()));
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = delta;
      return;
    }
  }
  throw CovarianceNotPSD("kernel Toeplitz matrix (n=" + std::to_string(n) + ", h=" + std::to_string(bandwidth) +
                         ") fails Cholesky with jitter up to 1e-8");
}

Vector MultiplierSampler::draw(CounterRng& rng) const {
  Vector z(static_cast<Eigen::Index>(n_));
  for (Eigen::Index t = 0; t < z.size(); ++t) z[t] = rng.next_normal();
  return factor_.triangularView<Eigen::Lower>() * z;
}

Matrix MultiplierSampler::draw_batch(std::uint64_t seed, std::size_t first, std::size_t count) const {
  Matrix z(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(count));
  for (std::size_t c = 0; c < count; ++c) {
    CounterRng rng(CounterRng::derive_key(seed, first + c));
    for (Eigen::Index t = 0; t < z.rows(); ++t) z(t, static_cast<Eigen::Index>(c)) = rng.next_normal();
  }
  return factor_.triangularView<Eigen::Lower>() * z;
}

Vector correlated_normals(std::size_t n, double bandwidth, const Kernel& kernel, CounterRng& rng) {
  return MultiplierSampler(n, bandwidth, kernel).draw(rng);
}

Matrix SecondOrderResiduals::at(std::size_t t) const {
  const auto row = static_cast<Eigen::Index>(t);
  return residual.row(row).transpose() * centered.row(row);
}

SecondOrderResiduals second_order_residuals(const Matrix& data, const Matrix& estimate) {
  const Eigen::Index n = data.rows();
  if (n < 2) throw PanelTooShort(static_cast<std::size_t>(n));
  if (estimate.rows() != data.cols() || estimate.cols() != data.cols())
    throw ShapeMismatch("estimate must be d x d for a panel with d columns");
  SecondOrderResiduals out;
  const RowVector mean = data.colwise().mean();
  out.centered = data.rowwise() - mean;
  // r_t^T = y_{t+1}^T - y_t^T A^T
  out.residual = out.centered.bottomRows(n - 1) - out.centered.topRows(n - 1) * estimate.transpose();
  return out;
}

SecondOrderResiduals second_order_residuals(const BinaryPanel& panel, const Matrix& estimate) {
  if (panel.n < 2) throw PanelTooShort(panel.n);
  return second_order_residuals(panel.as_matrix(), estimate);
}

RootProjection root_projection(const SecondOrderResiduals& residuals, const PostSelectionFit& fit,
                               const LagCovariances& cov) {
  const Eigen::Index d = cov.dim();
  const auto steps = static_cast<Eigen::Index>(residuals.size());
  RootProjection out;
  out.n = static_cast<std::size_t>(residuals.centered.rows());
  for (Eigen::Index i = 0; i < d; ++i)
    for (int j : fit.supports[static_cast<std::size_t>(i)]) out.entries.emplace_back(static_cast<int>(i), j);
  out.weights.resize(steps, static_cast<Eigen::Index>(out.entries.size()));
  if (out.entries.empty()) return out;

  const Matrix gram = cov.sigma0.transpose() * cov.sigma0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.n));
  const auto lagged = residuals.centered.topRows(steps);
  Eigen::Index column = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const IndexSet& support = fit.supports[static_cast<std::size_t>(i)];
    if (support.empty()) continue;
    const Matrix map = cov.sigma0 * partial_inverse(gram, support);
    Matrix map_s(d, static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) map_s.col(static_cast<Eigen::Index>(c)) = map.col(support[c]);
    const Matrix projected = lagged * map_s;  // (n-1) x |S_i|
    const Vector row_weight = residuals.residual.col(i) * scale;
    out.weights.middleCols(column, map_s.cols()) = row_weight.asDiagonal() * projected;
    column += map_s.cols();
  }
  return out;
}

Matrix bootstrap_roots(const RootProjection& projection, const Matrix& multipliers) {
  const Eigen::Index steps = projection.weights.rows();
  if (multipliers.rows() < steps) throw ShapeMismatch("multiplier columns are shorter than n - 1");
  const Eigen::Index count = multipliers.cols();
  Matrix roots(count, projection.weights.cols());
  const Eigen::Index chunks = (count + static_cast<Eigen::Index>(kReplicateChunk) - 1) / static_cast<Eigen::Index>(kReplicateChunk);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index first = c * static_cast<Eigen::Index>(kReplicateChunk);
    const Eigen::Index width = std::min<Eigen::Index>(static_cast<Eigen::Index>(kReplicateChunk), count - first);
    roots.middleRows(first, width).noalias() =
        multipliers.block(0, first, steps, width).transpose() * projection.weights;
  }
  return roots;
}

Matrix bootstrap_roots_reference(const SecondOrderResiduals& residuals, const PostSelectionFit& fit,
                                 const LagCovariances& cov, const Matrix& multipliers,
                                 const std::vector<std::pair<int, int>>& entries) {
  const Eigen::Index d = cov.dim();
  const std::size_t steps = residuals.size();
  const auto n = static_cast<double>(residuals.centered.rows());
  const Matrix gram = cov.sigma0.transpose() * cov.sigma0;
  Matrix roots(multipliers.cols(), static_cast<Eigen::Index>(entries.size()));
  for (Eigen::Index b = 0; b < multipliers.cols(); ++b) {
    LagCovariances resampled = cov;
    Matrix perturbation = Matrix::Zero(d, d);
    for (std::size_t t = 0; t < steps; ++t) perturbation += residuals.at(t) * multipliers(static_cast<Eigen::Index>(t), b);
    resampled.sigma1 = cov.sigma1 + perturbation / n;
    Matrix refit = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      refit.row(i) = post_select_row(resampled, gram, fit.supports[static_cast<std::size_t>(i)], i);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto [i, j] = entries[e];
      roots(b, static_cast<Eigen::Index>(e)) = std::sqrt(n) * (refit(i, j) - fit.estimate(i, j));
    }
  }
  return roots;
}

Matrix analytic_root_covariance(const RootProjection& projection, double bandwidth, const Kernel& kernel) {
  const Matrix t = kernel_toeplitz(static_cast<std::size_t>(projection.weights.rows()), bandwidth, kernel);
  return projection.weights.transpose() * t * projection.weights;
}

double critical_value(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw InvalidArgument("no bootstrap replicates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidLevel(alpha);
  const std::size_t b = sorted.size();
  for (std::size_t s = 1; s <= b; ++s)
    if (static_cast<double>(s) / static_cast<double>(b) >= 1.0 - alpha) return sorted[s - 1];
  return sorted.back();
}

std::uint64_t bootstrap_replicate_counter() { return g_replicates.load(); }

BootstrapResult bootstrap_run(const BinaryPanel& panel, const PostSelectionFit& fit, const LagCovariances& cov,
                              const BootstrapConfig& config) {
  config.validate();
  if (panel.n < 2) throw PanelTooShort(panel.n);
  if (static_cast<std::size_t>(fit.dim()) != panel.d || cov.dim() != fit.dim())
    throw ShapeMismatch("panel, fit and moments disagree on d");

  BootstrapResult result;
  result.replicates = config.replicates;
  result.alpha = config.alpha;
  result.bandwidth = config.bandwidth > 0.0 ? config.bandwidth : default_bandwidth(panel.n);
  result.kernel = config.kernel.name;
  result.seed = config.seed;
  result.n = panel.n;

  const SecondOrderResiduals residuals = second_order_residuals(panel, fit.estimate);
  const RootProjection projection = root_projection(residuals, fit, cov);
  const MultiplierSampler sampler(panel.n, result.bandwidth, config.kernel);
  result.jitter = sampler.jitter();

  const auto total = static_cast<std::size_t>(config.replicates);
  result.psi_stars.assign(total, 0.0);
  if (!projection.entries.empty()) {
    const auto chunks = static_cast<long>((total + kReplicateChunk - 1) / kReplicateChunk);
    const Eigen::Index steps = projection.weights.rows();
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < chunks; ++c) {
      const std::size_t first = static_cast<std::size_t>(c) * kReplicateChunk;
      const std::size_t width = std::min(kReplicateChunk, total - first);
      const Matrix e = sampler.draw_batch(config.seed, first, width);
      const Matrix roots = e.topRows(steps).transpose() * projection.weights;
      for (std::size_t b = 0; b < width; ++b)
        result.psi_stars[first + b] = roots.row(static_cast<Eigen::Index>(b)).cwiseAbs().maxCoeff();
    }
  }
  g_replicates.fetch_add(total);
  std::sort(result.psi_stars.begin(), result.psi_stars.end());
  result.critical_value = critical_value(result.psi_stars, config.alpha);
  result.ci_halfwidth = result.critical_value / std::sqrt(static_cast<double>(panel.n));
  return result;
}

bool ConfidenceRegion::contains(const Matrix& a) const {
  if (a.rows() != center.rows() || a.cols() != center.cols()) throw ShapeMismatch("region and matrix shapes differ");
  const double stat = std::sqrt(static_cast<double>(n)) * (center - a).cwiseAbs().maxCoeff();
  return stat <= critical_value;
}

ConfidenceRegion simultaneous_ci(const BootstrapResult& result, const PostSelectionFit& fit) {
  ConfidenceRegion region;
  region.center = fit.estimate;
  region.critical_value = result.critical_value;
  region.halfwidth = result.critical_value / std::sqrt(static_cast<double>(result.n));
  region.n = result.n;
  region.lower = fit.estimate.array() - region.halfwidth;
  region.upper = fit.estimate.array() + region.halfwidth;
  const Eigen::Index d = fit.dim();
  region.selected.setConstant(d, d, false);
  for (Eigen::Index i = 0; i < d; ++i)
    for (int j : fit.supports[static_cast<std::size_t>(i)]) region.selected(i, j) = true;
  return region;
}

TestVerdict hypothesis_test(const BootstrapResult& result, const PostSelectionFit& fit, const Matrix& null) {
  if (null.rows() != fit.estimate.rows() || null.cols() != fit.estimate.cols())
    throw ShapeMismatch("null matrix must match the estimate");
  TestVerdict verdict;
  verdict.critical_value = result.critical_value;
  verdict.statistic = std::sqrt(static_cast<double>(result.n)) * (fit.estimate - null).cwiseAbs().maxCoeff();
  verdict.reject = verdict.statistic > result.critical_value;
  return verdict;
}

Matrix longrun_cov_estimate(const Matrix& series, double bandwidth, const Kernel& kernel) {
  if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
  const Eigen::Index n = series.rows();
  const Eigen::Index m = series.cols();
  Matrix out = Matrix::Zero(m, m);
  if (n == 0) return out;
  out += kernel(0.0) * (series.transpose() * series);
  for (Eigen::Index lag = 1; lag < n; ++lag) {
    const double w = kernel(static_cast<double>(lag) / bandwidth);
    if (w == 0.0) continue;
    // sum_t X_{t+lag} X_t^T and its transpose cover both orderings of (t1, t2).
    const Matrix cross = series.bottomRows(n - lag).transpose() * series.topRows(n - lag);
    out += w * (cross + cross.transpose());
  }
  return out / static_cast<double>(n);
}

}  // namespace gbvar
