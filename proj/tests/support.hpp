#pragma once

#include <random>

#include "gbvar/model.hpp"

namespace gbvar::testing {

/// Random valid gbVAR(1): about a third of the coefficients are zero, signs
/// are random, beta_k >= 0.05 and mu_e in [0.1, 0.9].
inline GbvarParams random_params(int d, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a = Matrix::Zero(d, d);
  Vector beta(d), mu(d);
  for (int k = 0; k < d; ++k) {
    Vector w(d + 1);
    for (int l = 0; l < d; ++l) w(l) = unit(gen) < 0.33 ? 0.0 : unit(gen);
    w(d) = 0.05 + unit(gen);
    const double beta_floor = 0.05;
    w.head(d) *= (1.0 - beta_floor) / w.sum();
    for (int l = 0; l < d; ++l) a(k, l) = unit(gen) < 0.5 ? -w(l) : w(l);
    beta(k) = 1.0 - a.row(k).cwiseAbs().sum();
    mu(k) = 0.1 + 0.8 * unit(gen);
  }
  return make_params(a, beta, mu);
}

}  // namespace gbvar::testing
