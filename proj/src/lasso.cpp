#include "gbvar/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "gbvar/error.hpp"

namespace gbvar {

void LassoConfig::validate() const {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
}

LassoSolution lasso_gram(const Matrix& gram, const Vector& xty, const LassoConfig& config) {
  config.validate();
  const Eigen::Index p = xty.size();
  LassoSolution out;
  out.coef = Vector::Zero(p);
  // fitted = gram * coef, updated incrementally.
  Vector fitted = Vector::Zero(p);
  out.converged = false;
  for (int sweep = 1; sweep <= config.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double g_jj = gram(j, j);
      if (!(g_jj > 0.0)) continue;  // zero column: coefficient stays 0
      const double old = out.coef[j];
      const double partial = xty[j] - (fitted[j] - g_jj * old);
      const double updated = soft_threshold(partial, config.lambda) / g_jj;
      const double delta = updated - old;
      if (delta != 0.0) {
        out.coef[j] = updated;
        fitted.noalias() += gram.col(j) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    out.iterations = sweep;
    if (max_change < config.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

LassoSolution lasso_row(const Vector& y, const Matrix& x, const LassoConfig& config) {
  if (x.rows() != y.size()) throw ShapeMismatch("lasso design rows must match y");
  const double m = static_cast<double>(x.rows());
  const Matrix gram = (x.transpose() * x) / m;
  const Vector xty = (x.transpose() * y) / m;
  return lasso_gram(gram, xty, config);
}

double lambda_max(const Vector& y, const Matrix& x) {
  return ((x.transpose() * y) / static_cast<double>(x.rows())).cwiseAbs().maxCoeff();
}

double kkt_violation(const Vector& y, const Matrix& x, const Vector& coef, double lambda) {
  const Vector grad = x.transpose() * (x * coef - y) / static_cast<double>(x.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < coef.size(); ++j) {
    const double v = coef[j] != 0.0 ? std::abs(grad[j] + lambda * (coef[j] > 0.0 ? 1.0 : -1.0))
                                     : std::max(std::abs(grad[j]) - lambda, 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

bool LassoFamily::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
}

namespace {

struct SharedGram {
  Matrix gram;  // Sigma0^T Sigma0 / d
  Matrix xty;   // column i = Sigma0^T Sigma1_{i.}^T / d
};

SharedGram shared_gram(const LagCovariances& cov) {
  const double m = static_cast<double>(cov.dim());
  return {(cov.sigma0.transpose() * cov.sigma0) / m, (cov.sigma0.transpose() * cov.sigma1.transpose()) / m};
}

LassoFamily empty_family(Eigen::Index d) {
  LassoFamily out;
  out.coef = Matrix::Zero(d, d);
  out.iterations.assign(static_cast<std::size_t>(d), 0);
  out.converged.assign(static_cast<std::size_t>(d), 1);
  return out;
}

void store_row(LassoFamily& family, Eigen::Index i, const LassoSolution& sol) {
  family.coef.row(i) = sol.coef.transpose();
  family.iterations[static_cast<std::size_t>(i)] = sol.iterations;
  family.converged[static_cast<std::size_t>(i)] = sol.converged ? 1 : 0;
}

}  // namespace

LassoFamily lasso_rows(const LagCovariances& cov, const LassoConfig& config) {
  config.validate();
  const Eigen::Index d = cov.dim();
  const SharedGram shared = shared_gram(cov);
  LassoFamily out = empty_family(d);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < d; ++i) store_row(out, i, lasso_gram(shared.gram, shared.xty.col(i), config));
  return out;
}

LassoFamily lasso_rows_serial(const LagCovariances& cov, const LassoConfig& config) {
  config.validate();
  const Eigen::Index d = cov.dim();
  const SharedGram shared = shared_gram(cov);
  LassoFamily out = empty_family(d);
  for (Eigen::Index i = 0; i < d; ++i) store_row(out, i, lasso_gram(shared.gram, shared.xty.col(i), config));
  return out;
}

}  // namespace gbvar
