#include "gbvar/sparse.hpp"

#include <cmath>

#include "gbvar/error.hpp"

namespace gbvar {

IndexSet select_support(const Eigen::Ref<const RowVector>& row, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold b_d must be >= 0");
  IndexSet out;
  for (Eigen::Index j = 0; j < row.size(); ++j)
    if (std::abs(row[j]) > threshold) out.push_back(static_cast<int>(j));
  return out;
}

namespace {

Matrix pseudo_inverse(const Matrix& block) {
  const double scale = block.cwiseAbs().maxCoeff();
  const bool symmetric = (block - block.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1e-300);
  if (symmetric) {
    const Matrix sym = 0.5 * (block + block.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    const Vector& values = eig.eigenvalues();
    const double cutoff = 1e-12 * values.cwiseAbs().maxCoeff();
    Vector inv = Vector::Zero(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k)
      if (std::abs(values[k]) > cutoff) inv[k] = 1.0 / values[k];
    const Matrix& vecs = eig.eigenvectors();
    return vecs * inv.asDiagonal() * vecs.transpose();
  }
  const Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() ? 1e-12 * sv[0] : 0.0;
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv[k] > cutoff) inv[k] = 1.0 / sv[k];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

Matrix partial_inverse(const Matrix& a, const IndexSet& support) {
  if (a.rows() != a.cols()) throw ShapeMismatch("partial_inverse needs a square matrix");
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  if (support.empty()) return out;
  for (int j : support)
    if (j < 0 || j >= a.rows()) throw InvalidArgument("support index out of range");
  const auto s = static_cast<Eigen::Index>(support.size());
  Matrix block(s, s);
  for (Eigen::Index r = 0; r < s; ++r)
    for (Eigen::Index c = 0; c < s; ++c) block(r, c) = a(support[r], support[c]);
  const Matrix z = pseudo_inverse(block);
  for (Eigen::Index r = 0; r < s; ++r)
    for (Eigen::Index c = 0; c < s; ++c) out(support[r], support[c]) = z(r, c);
  return out;
}

std::size_t PostSelectionFit::selected_count() const {
  std::size_t total = 0;
  for (const auto& s : supports) total += s.size();
  return total;
}

RowVector post_select_row(const LagCovariances& cov, const Matrix& gram, const IndexSet& support,
                          Eigen::Index row) {
  const Eigen::Index d = cov.dim();
  if (support.empty()) return RowVector::Zero(d);
  RowVector out = (cov.sigma1.row(row) * cov.sigma0) * partial_inverse(gram, support);
  // F_S has zero columns off S; make the zero pattern exact.
  RowVector exact = RowVector::Zero(d);
  for (int j : support) exact[j] = out[j];
  return exact;
}

RowVector restricted_least_squares(const LagCovariances& cov, const IndexSet& support, Eigen::Index row) {
  const Eigen::Index d = cov.dim();
  RowVector out = RowVector::Zero(d);
  if (support.empty()) return out;
  Matrix design(d, static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) design.col(static_cast<Eigen::Index>(c)) = cov.sigma0.col(support[c]);
  const Vector target = cov.sigma1.row(row).transpose();
  const Vector coef = design.colPivHouseholderQr().solve(target);
  for (std::size_t c = 0; c < support.size(); ++c) out[support[c]] = coef[static_cast<Eigen::Index>(c)];
  return out;
}

namespace {

PostSelectionFit start_fit(const LassoFamily& family, double threshold, const LassoConfig& lasso) {
  PostSelectionFit fit;
  fit.lasso = family.coef;
  fit.lasso_config = lasso;
  fit.lasso_converged = family.all_converged();
  fit.threshold = threshold;
  const Eigen::Index d = family.coef.rows();
  fit.supports.resize(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) fit.supports[static_cast<std::size_t>(i)] = select_support(fit.lasso.row(i), threshold);
  fit.estimate = Matrix::Zero(d, d);
  return fit;
}

void refit_rows(const LagCovariances& cov, PostSelectionFit& fit, bool parallel) {
  const Eigen::Index d = cov.dim();
  const Matrix gram = cov.sigma0.transpose() * cov.sigma0;
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < d; ++i)
      fit.estimate.row(i) = post_select_row(cov, gram, fit.supports[static_cast<std::size_t>(i)], i);
  } else {
    for (Eigen::Index i = 0; i < d; ++i)
      fit.estimate.row(i) = post_select_row(cov, gram, fit.supports[static_cast<std::size_t>(i)], i);
  }
}

}  // namespace

PostSelectionFit post_select_fit(const LagCovariances& cov, const LassoConfig& lasso, double threshold) {
  PostSelectionFit fit = start_fit(lasso_rows(cov, lasso), threshold, lasso);
  refit_rows(cov, fit, true);
  return fit;
}

PostSelectionFit post_select_fit_serial(const LagCovariances& cov, const LassoConfig& lasso, double threshold) {
  PostSelectionFit fit = start_fit(lasso_rows_serial(cov, lasso), threshold, lasso);
  refit_rows(cov, fit, false);
  return fit;
}

PostSelectionFit refit_with_threshold(const LagCovariances& cov, const PostSelectionFit& fit, double threshold) {
  LassoFamily family;
  family.coef = fit.lasso;
  family.converged.assign(static_cast<std::size_t>(fit.lasso.rows()), fit.lasso_converged ? 1 : 0);
  PostSelectionFit out = start_fit(family, threshold, fit.lasso_config);
  refit_rows(cov, out, false);
  return out;
}

Matrix threshold_lasso(const Matrix& lasso, double threshold) {
  return lasso.unaryExpr([threshold](double v) { return std::abs(v) > threshold ? v : 0.0; });
}

EstimationMetrics metrics(const Matrix& est, const Matrix& truth, double zero_tol) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols()) throw ShapeMismatch("metrics need equal shapes");
  EstimationMetrics out;
  const Matrix diff = est - truth;
  if (diff.size() == 0) return out;
  out.r1 = diff.cwiseAbs().rowwise().sum().maxCoeff();
  out.r2 = diff.rowwise().norm().maxCoeff();
  for (Eigen::Index i = 0; i < est.rows(); ++i)
    for (Eigen::Index j = 0; j < est.cols(); ++j) {
      const bool est_zero = std::abs(est(i, j)) <= zero_tol;
      const bool truth_zero = truth(i, j) == 0.0;
      if (est_zero != truth_zero) ++out.kappa;
    }
  return out;
}

}  // namespace gbvar
