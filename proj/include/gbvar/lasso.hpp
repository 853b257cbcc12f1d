#pragma once

#include <vector>

#include "gbvar/moments.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

struct LassoConfig {
  double lambda = 0.0;
  int max_iter = 100000;
  double tol = 1e-8;

  void validate() const;
};

struct LassoSolution {
  Vector coef;
  int iterations = 0;
  bool converged = true;
};

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

/// Cyclic coordinate descent for
///   argmin_w (1/(2m)) |y - X w|_2^2 + lambda |w|_1,   m = rows of X,
/// on the Gram form gram = X^T X / m, xty = X^T y / m. Stops when the largest
/// coordinate change of a sweep is below tol; otherwise returns the last
/// iterate with converged = false after max_iter sweeps.
LassoSolution lasso_gram(const Matrix& gram, const Vector& xty, const LassoConfig& config);

LassoSolution lasso_row(const Vector& y, const Matrix& x, const LassoConfig& config);

/// Smallest lambda with an all-zero solution: max_j |X_j^T y| / m.
double lambda_max(const Vector& y, const Matrix& x);

/// Largest violation of the Lasso optimality conditions at `coef`:
/// |grad_j + lambda sign(w_j)| on nonzeros, max(|grad_j| - lambda, 0) on zeros,
/// with grad = X^T (X w - y) / m.
double kkt_violation(const Vector& y, const Matrix& x, const Vector& coef, double lambda);

/// Row-wise Lasso for every row i of the transition matrix:
/// y = Sigma1_{i.}^T, X = Sigma0. The Gram matrix is shared by all rows.
struct LassoFamily {
  Matrix coef;  // d x d, row i = hat alpha_{i.}
  std::vector<int> iterations;
  std::vector<char> converged;

  bool all_converged() const;
};

/// OpenMP over rows.
LassoFamily lasso_rows(const LagCovariances& cov, const LassoConfig& config);
/// Serial reference for `lasso_rows`; identical results.
LassoFamily lasso_rows_serial(const LagCovariances& cov, const LassoConfig& config);

}  // namespace gbvar
