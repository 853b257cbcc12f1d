#pragma once

#include <cstdint>

#include "gbvar/model.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

/// Maximum dimension accepted by the exact chain (2^d states).
inline constexpr int kOracleMaxDim = 12;

/// Exact Markov chain of a gbVAR(1) with independent Bernoulli innovations.
/// State x in {0,1}^d is encoded as the integer sum_k x_k 2^k.
struct ExactChain {
  int d = 0;
  Matrix transition;  // 2^d x 2^d, row-stochastic
  bool irreducible = true;

  Eigen::Index states() const { return transition.rows(); }
};

/// Bit k of the state code.
inline int state_bit(Eigen::Index code, int k) { return static_cast<int>((code >> k) & 1); }

/// P(X_{t,k} = 1 | X_{t-1} = x) = sum_l |alpha_kl| [x_l if alpha_kl >= 0 else 1 - x_l] + beta_k mu_{e,k}.
Vector conditional_probabilities(const GbvarParams& params, Eigen::Index state);

/// Rows are products of the per-coordinate conditionals (rows of the
/// multinomial draw are independent given x). Throws DimensionTooLarge for d > 12.
ExactChain exact_transition_matrix(const GbvarParams& params);

/// Power iteration from the uniform law (tol 1e-14); falls back to the
/// linear solve if it has not converged after `max_iter` steps.
Vector stationary_distribution(const ExactChain& chain, int max_iter = 1000000);
/// Direct solve of pi (P - I) = 0 with the normalization row appended.
Vector stationary_distribution_direct(const ExactChain& chain);

struct ExactMoments {
  Vector mu;
  Matrix sigma0;
  Matrix sigma1;  // E (X_{t+1} - mu)(X_t - mu)^T
  Vector pi;
};

/// Throws NotIrreducible when some conditional probability is exactly 0 or 1.
ExactMoments exact_stationary_moments(const ExactChain& chain);

}  // namespace gbvar
