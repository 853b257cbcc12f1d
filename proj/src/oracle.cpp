#include "gbvar/oracle.hpp"

#include <cmath>

#include "gbvar/error.hpp"

namespace gbvar {

Vector conditional_probabilities(const GbvarParams& params, Eigen::Index state) {
  if (params.p != 1) throw InvalidArgument("the exact chain needs p = 1 (stack p > 1 first)");
  const int d = params.d;
  const Matrix& a = params.a();
  Vector prob(d);
  for (int k = 0; k < d; ++k) {
    double value = params.beta[k] * params.mu_e[k];
    for (int l = 0; l < d; ++l) {
      const int x = state_bit(state, l);
      value += std::abs(a(k, l)) * (a(k, l) >= 0.0 ? x : 1 - x);
    }
    prob[k] = value;
  }
  return prob;
}

ExactChain exact_transition_matrix(const GbvarParams& params) {
  if (params.d > kOracleMaxDim) throw DimensionTooLarge(static_cast<std::size_t>(params.d));
  ExactChain chain;
  chain.d = params.d;
  const Eigen::Index states = Eigen::Index{1} << params.d;
  chain.transition.resize(states, states);
  for (Eigen::Index x = 0; x < states; ++x) {
    const Vector prob = conditional_probabilities(params, x);
    for (int k = 0; k < params.d; ++k)
      if (!(prob[k] > 0.0 && prob[k] < 1.0)) chain.irreducible = false;
    for (Eigen::Index y = 0; y < states; ++y) {
      double p = 1.0;
      for (int k = 0; k < params.d; ++k) p *= state_bit(y, k) ? prob[k] : 1.0 - prob[k];
      chain.transition(x, y) = p;
    }
  }
  return chain;
}

Vector stationary_distribution_direct(const ExactChain& chain) {
  const Eigen::Index s = chain.states();
  // Rows: (P^T - I) pi = 0, plus 1^T pi = 1.
  Matrix system(s + 1, s);
  system.topRows(s) = chain.transition.transpose() - Matrix::Identity(s, s);
  system.row(s).setOnes();
  Vector rhs = Vector::Zero(s + 1);
  rhs[s] = 1.0;
  Vector pi = system.colPivHouseholderQr().solve(rhs);
  return pi / pi.sum();
}

Vector stationary_distribution(const ExactChain& chain, int max_iter) {
  const Eigen::Index s = chain.states();
  RowVector pi = RowVector::Constant(s, 1.0 / static_cast<double>(s));
  for (int it = 0; it < max_iter; ++it) {
    RowVector next = pi * chain.transition;
    next /= next.sum();
    const double change = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (change <= 1e-14) return pi.transpose();
  }
  return stationary_distribution_direct(chain);
}

ExactMoments exact_stationary_moments(const ExactChain& chain) {
  if (!chain.irreducible) throw NotIrreducible();
  const int d = chain.d;
  const Eigen::Index s = chain.states();
  ExactMoments out;
  out.pi = stationary_distribution(chain);

  Matrix states(s, d);
  for (Eigen::Index x = 0; x < s; ++x)
    for (int k = 0; k < d; ++k) states(x, k) = state_bit(x, k);
  out.mu = states.transpose() * out.pi;
  const Matrix centered = states.rowwise() - out.mu.transpose();
  out.sigma0 = centered.transpose() * out.pi.asDiagonal() * centered;
  // sum_{x,y} pi(x) P(y|x) (y - mu)(x - mu)^T
  const Matrix joint = out.pi.asDiagonal() * chain.transition;  // (x, y) -> pi(x) P(y|x)
  out.sigma1 = centered.transpose() * joint.transpose() * centered;
  return out;
}

}  // namespace gbvar
