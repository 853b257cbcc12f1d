#pragma once

#include <vector>

#include "gbvar/lasso.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

/// {j : |row_j| > threshold}; ties at the threshold are excluded.
IndexSet select_support(const Eigen::Ref<const RowVector>& row, double threshold);

/// Moore-Penrose pseudo-inverse of the S x S block of `a`, zero-padded back
/// to the full size. Symmetric blocks go through an eigendecomposition with
/// relative cutoff 1e-12 * (largest |eigenvalue|); others through an SVD
/// with the same relative cutoff on singular values.
Matrix partial_inverse(const Matrix& a, const IndexSet& support);

/// Output of the two-stage estimator: row-wise Lasso, thresholded supports,
/// and the least-squares refit on each support.
struct PostSelectionFit {
  Matrix lasso;                  // hat A
  std::vector<IndexSet> supports;  // hat S_i, 0-based
  Matrix estimate;               // tilde A, zero off the supports
  double threshold = 0.0;        // b_d
  LassoConfig lasso_config;
  bool lasso_converged = true;

  Eigen::Index dim() const { return estimate.rows(); }
  /// Number of (i, j) with j in S_i.
  std::size_t selected_count() const;
};

/// tilde alpha_{i.} = Sigma1_{i.} Sigma0 F_{S_i}(Sigma0^T Sigma0); zero row when S_i is empty.
RowVector post_select_row(const LagCovariances& cov, const Matrix& gram, const IndexSet& support,
                          Eigen::Index row);

/// Direct least squares of Sigma1_{i.}^T on the columns S of Sigma0 (QR).
/// Agrees with `post_select_row` whenever those columns have full rank.
RowVector restricted_least_squares(const LagCovariances& cov, const IndexSet& support, Eigen::Index row);

/// Rows refit in parallel (OpenMP).
PostSelectionFit post_select_fit(const LagCovariances& cov, const LassoConfig& lasso, double threshold);
/// Serial reference for `post_select_fit`.
PostSelectionFit post_select_fit_serial(const LagCovariances& cov, const LassoConfig& lasso, double threshold);

/// Refit on new thresholds without redoing the Lasso.
PostSelectionFit refit_with_threshold(const LagCovariances& cov, const PostSelectionFit& fit, double threshold);

/// Threshold-Lasso reporting mode: hat A with entries |a| <= b_d set to 0, no refit.
Matrix threshold_lasso(const Matrix& lasso, double threshold);

struct EstimationMetrics {
  double r1 = 0.0;  // max_i sum_j |est - truth|
  double r2 = 0.0;  // max_i sqrt(sum_j (est - truth)^2)
  int kappa = 0;    // entries where exactly one of est, truth is zero
};

/// `zero_tol` is applied to the estimate only (|est| <= zero_tol counts as 0);
/// zeros of `truth` are structural and tested exactly.
EstimationMetrics metrics(const Matrix& est, const Matrix& truth, double zero_tol = 0.0);

}  // namespace gbvar
