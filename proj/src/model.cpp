#include "gbvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbvar/error.hpp"

namespace gbvar {

GbvarParams validate_params(GbvarParams raw) {
  if (raw.p < 1) throw InvalidArgument("lag order p must be >= 1");
  if (raw.d < 1) throw InvalidArgument("dimension d must be >= 1");
  const auto d = static_cast<Eigen::Index>(raw.d);
  if (static_cast<int>(raw.coef.size()) != raw.p)
    throw ShapeMismatch("expected " + std::to_string(raw.p) + " coefficient matrices");
  for (const auto& m : raw.coef) {
    if (m.rows() != d || m.cols() != d) throw ShapeMismatch("coefficient matrix must be d x d");
    if (!m.allFinite()) throw InvalidArgument("coefficient matrix has non-finite entries");
  }
  if (raw.beta.size() != d) throw ShapeMismatch("beta must have length d");
  if (raw.mu_e.size() != d) throw ShapeMismatch("mu_e must have length d");

  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(raw.beta[k] > 0.0)) throw NonpositiveBeta(static_cast<std::size_t>(k));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(raw.mu_e[i] > 0.0 && raw.mu_e[i] < 1.0))
      throw InnovationMeanOutOfRange(static_cast<std::size_t>(i));
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    double total = raw.beta[k];
    for (const auto& m : raw.coef) total += m.row(k).cwiseAbs().sum();
    const double residual = total - 1.0;
    if (std::abs(residual) > kConstraintTolerance)
      throw ConstraintViolation(static_cast<std::size_t>(k), residual);
  }
  return raw;
}

GbvarParams make_params(const Matrix& a, const Vector& beta, const Vector& mu_e) {
  GbvarParams params;
  params.p = 1;
  params.d = static_cast<int>(a.rows());
  params.coef = {a};
  params.beta = beta;
  params.mu_e = mu_e;
  return validate_params(std::move(params));
}

CounterpartParams counterpart(const GbvarParams& params) {
  const Eigen::Index d = params.d;
  const Eigen::Index width = d * (params.p + 1);
  CounterpartParams out;
  out.beta = params.beta;
  out.row_probs.resize(d, width);
  for (int q = 0; q < params.p; ++q) {
    out.abs_coef.push_back(params.coef[q].cwiseAbs());
    out.row_probs.middleCols(q * d, d) = out.abs_coef.back();
  }
  // B is diagonal: row k of the last block is beta_k at slot p*d + k.
  out.row_probs.rightCols(d).setZero();
  out.row_probs.rightCols(d).diagonal() = params.beta;
  out.cumulative.resize(d, width);
  for (Eigen::Index k = 0; k < d; ++k) {
    double running = 0.0;
    for (Eigen::Index j = 0; j < width; ++j) {
      running += out.row_probs(k, j);
      out.cumulative(k, j) = running;
    }
    // Slots past the row's own B slot have zero mass; pin them to 1 so
    // rounding in the running sum can never select them.
    for (Eigen::Index j = params.p * d + k; j < width; ++j) out.cumulative(k, j) = 1.0;
  }
  return out;
}

Vector stationary_mean(const GbvarParams& params) {
  const Eigen::Index d = params.d;
  Matrix system = Matrix::Identity(d, d);
  Vector rhs = params.beta.cwiseProduct(params.mu_e);
  for (const auto& a : params.coef) {
    system -= a;
    rhs += (-a).cwiseMax(0.0).rowwise().sum();
  }
  Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) throw SingularSystem("I - A has reciprocal condition " + std::to_string(rcond));
  Vector mu = lu.solve(rhs);
  // Exact values lie in [0,1]; clip rounding excursions only.
  return mu.cwiseMax(0.0).cwiseMin(1.0);
}

namespace {

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Matrix absolute_companion(const GbvarParams& params) {
  const Eigen::Index d = params.d;
  const Eigen::Index dim = d * params.p;
  Matrix out = Matrix::Zero(dim, dim);
  for (int q = 0; q < params.p; ++q) out.block(0, q * d, d, d) = params.coef[q].cwiseAbs();
  if (params.p > 1) out.block(d, 0, dim - d, dim - d).setIdentity();
  return out;
}

StationarityReport stationarity_diagnostics(const GbvarParams& params) {
  StationarityReport report;
  Matrix lag_sum = Matrix::Zero(params.d, params.d);
  for (const auto& a : params.coef) lag_sum += a.cwiseAbs();
  report.max_rowsum = params.d > 0 ? lag_sum.rowwise().sum().maxCoeff() : 0.0;
  report.spectral_radius = spectral_radius(absolute_companion(params));
  report.is_stationary = report.max_rowsum < 1.0 && report.spectral_radius < 1.0;
  return report;
}

StationarityReport stationarity_diagnostics(const Matrix& coef) {
  if (coef.rows() != coef.cols()) throw ShapeMismatch("coefficient matrix must be square");
  StationarityReport report;
  const Matrix abs = coef.cwiseAbs();
  report.max_rowsum = abs.size() ? abs.rowwise().sum().maxCoeff() : 0.0;
  report.spectral_radius = spectral_radius(abs);
  report.is_stationary = report.max_rowsum < 1.0 && report.spectral_radius < 1.0;
  return report;
}

CompanionForm stack_to_var1(const GbvarParams& params) {
  CompanionForm out;
  out.base = params;
  const Eigen::Index d = params.d;
  const Eigen::Index dim = d * params.p;
  if (params.p == 1) {
    out.coef = params.coef.front();
    out.selector = Matrix::Identity(d, d);
    return out;
  }
  out.coef = Matrix::Zero(dim, dim);
  for (int q = 0; q < params.p; ++q) out.coef.block(0, q * d, d, d) = params.coef[q];
  out.coef.block(d, 0, dim - d, dim - d).setIdentity();
  out.selector = Matrix::Zero(d, dim);
  out.selector.leftCols(d).setIdentity();
  return out;
}

}  // namespace gbvar
