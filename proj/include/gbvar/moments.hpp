#pragma once

#include <cstddef>

#include "gbvar/simulator.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

/// Sample mean and lag-0 / lag-1 autocovariances of a panel.
struct LagCovariances {
  Vector mean;
  Matrix sigma0;
  Matrix sigma1;
  std::size_t n = 0;

  Eigen::Index dim() const { return mean.size(); }
};

/// Sigma^(k) = (1/n) sum_{t=1}^{n-k} (X_{t+k} - Xbar)(X_t - Xbar)^T for k = 0, 1.
/// Divisor is n for both lags and both factors use the full-sample mean.
/// Sigma^(0) is symmetrized after accumulation.
LagCovariances sample_moments(const BinaryPanel& panel);
LagCovariances sample_moments(const Matrix& data);

/// Dense Yule-Walker / OLS baseline: A = Sigma^(1) (Sigma^(0))^{-1}.
/// Throws SingularCovariance when the reciprocal condition number of
/// Sigma^(0) is below 1e-12 (always the case when d > n).
Matrix yule_walker_ols(const LagCovariances& cov);

}  // namespace gbvar
