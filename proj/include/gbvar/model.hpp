#pragma once

#include <vector>

#include "gbvar/types.hpp"

namespace gbvar {

/// Absolute tolerance on the per-row constraint sum |alpha| + beta = 1.
inline constexpr double kConstraintTolerance = 1e-10;

/// Parameters of a gbVAR(p) process: coefficient matrices A^(1..p) (signed),
/// diagonal of B, and the Bernoulli innovation means.
///
/// Construct through `validate_params`; fitted matrices that need not obey
/// the row constraint are passed around as plain `Matrix`.
struct GbvarParams {
  int p = 1;
  int d = 0;
  std::vector<Matrix> coef;
  Vector beta;
  Vector mu_e;

  const Matrix& a() const { return coef.front(); }
};

/// Checks shapes and the row constraint; returns the params unchanged on success.
GbvarParams validate_params(GbvarParams raw);

/// Convenience for p = 1.
GbvarParams make_params(const Matrix& a, const Vector& beta, const Vector& mu_e);

/// Counterpart matrix P_|.| split into its blocks, plus each row as a
/// multinomial probability vector [|A^(1)_k.|, ..., |A^(p)_k.|, beta_k]
/// of length d(p+1), with running sums for inverse-CDF sampling.
struct CounterpartParams {
  std::vector<Matrix> abs_coef;
  Vector beta;
  Matrix row_probs;   // d x d(p+1)
  Matrix cumulative;  // d x d(p+1), 1 from the row's B slot onward
};

CounterpartParams counterpart(const GbvarParams& params);

/// mu = (I - A)^{-1} (A^(-) 1 + B mu_e) for p = 1, where A^(-) keeps the
/// magnitudes of the negative entries. Throws SingularSystem when I - A is
/// numerically singular.
Vector stationary_mean(const GbvarParams& params);

struct StationarityReport {
  double max_rowsum = 0.0;
  double spectral_radius = 0.0;
  bool is_stationary = true;
};

StationarityReport stationarity_diagnostics(const GbvarParams& params);
/// Diagnostics for an unconstrained (e.g. fitted) d x d matrix.
StationarityReport stationarity_diagnostics(const Matrix& coef);

/// VAR(1) companion layout of a gbVAR(p): Z_t = (X_t, X_{t-1}, ..., X_{t-p+1}).
/// The first d rows of `coef` are [A^(1) ... A^(p)]; the remaining rows are
/// the deterministic shift block. It is bookkeeping for simulation and
/// spectral diagnostics, not a GbvarParams (shift rows have no innovation).
struct CompanionForm {
  GbvarParams base;
  Matrix coef;      // pd x pd, signed
  Matrix selector;  // d x pd, J = [I_d, 0]

  int dim() const { return base.p * base.d; }
};

CompanionForm stack_to_var1(const GbvarParams& params);

/// Absolute companion matrix (pd x pd) used for the spectral diagnostic.
Matrix absolute_companion(const GbvarParams& params);

}  // namespace gbvar
