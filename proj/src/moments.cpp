#include "gbvar/moments.hpp"

#include "gbvar/error.hpp"

namespace gbvar {

LagCovariances sample_moments(const Matrix& data) {
  const Eigen::Index n = data.rows();
  if (n < 2) throw PanelTooShort(static_cast<std::size_t>(n));
  LagCovariances out;
  out.n = static_cast<std::size_t>(n);
  out.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - out.mean.transpose();
  const double inv_n = 1.0 / static_cast<double>(n);
  out.sigma0 = (centered.transpose() * centered) * inv_n;
  out.sigma0 = 0.5 * (out.sigma0 + out.sigma0.transpose()).eval();
  // (i, j) entry: sum_t Y_{t+1,i} Y_{t,j}
  out.sigma1 = (centered.bottomRows(n - 1).transpose() * centered.topRows(n - 1)) * inv_n;
  return out;
}

LagCovariances sample_moments(const BinaryPanel& panel) {
  if (panel.n < 2) throw PanelTooShort(panel.n);
  return sample_moments(panel.as_matrix());
}

Matrix yule_walker_ols(const LagCovariances& cov) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov.sigma0, Eigen::EigenvaluesOnly);
  const Vector& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  const double rcond = largest > 0.0 ? values.minCoeff() / largest : 0.0;
  if (!(rcond >= 1e-12)) throw SingularCovariance(rcond);
  // A Sigma0 = Sigma1  <=>  Sigma0 A^T = Sigma1^T (Sigma0 symmetric).
  return cov.sigma0.ldlt().solve(cov.sigma1.transpose()).transpose();
}

}  // namespace gbvar
