#include "gbvar/tuning.hpp"

#include <cmath>

#include "gbvar/error.hpp"
#include "gbvar/moments.hpp"

namespace gbvar {

TuneGrid TuneGrid::defaults() {
  TuneGrid grid;
  for (int k = 0; k < 15; ++k) grid.lambdas.push_back(std::pow(10.0, -7.0 + 6.0 * k / 14.0));
  for (int k = 0; k < 16; ++k) grid.thresholds.push_back(0.02 * k);
  return grid;
}

void TuneGrid::validate() const {
  if (lambdas.empty() || thresholds.empty()) throw InvalidArgument("tuning grids must be nonempty");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw InvalidArgument("lambda grid values must be >= 0");
  for (double b : thresholds)
    if (!(b >= 0.0)) throw InvalidArgument("threshold grid values must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train_fraction must lie in (0,1)");
}

double matrix_one_norm(const Matrix& m) { return m.size() ? m.cwiseAbs().colwise().sum().maxCoeff() : 0.0; }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.transpose() * m;
  if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Vector v = Vector::Ones(gram.cols()).normalized();
  double estimate = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = std::sqrt(norm);
    const bool done = std::abs(next - estimate) <= 1e-9 * std::max(1.0, next);
    estimate = next;
    v = std::move(w);
    if (done) break;
  }
  return estimate;
}

TuneResult tune(const BinaryPanel& panel, const TuneGrid& grid, const LassoConfig& base) {
  grid.validate();
  const auto n_train = static_cast<std::size_t>(std::floor(grid.train_fraction * static_cast<double>(panel.n)));
  if (n_train < 2 || panel.n - n_train < 2) throw PanelTooShort(panel.n);
  const LagCovariances train = sample_moments(panel.slice(0, n_train));
  const LagCovariances test = sample_moments(panel.slice(n_train, panel.n - n_train));

  const std::size_t n_lambda = grid.lambdas.size();
  const std::size_t n_bd = grid.thresholds.size();
  TuneResult result;
  result.table.resize(n_lambda * n_bd);
#pragma omp parallel for schedule(dynamic)
  for (long li = 0; li < static_cast<long>(n_lambda); ++li) {
    LassoConfig config = base;
    config.lambda = grid.lambdas[static_cast<std::size_t>(li)];
    const PostSelectionFit lasso_fit = post_select_fit_serial(train, config, grid.thresholds.front());
    for (std::size_t bi = 0; bi < n_bd; ++bi) {
      const PostSelectionFit fit =
          bi == 0 ? lasso_fit : refit_with_threshold(train, lasso_fit, grid.thresholds[bi]);
      const Matrix gap = test.sigma1 - fit.estimate * test.sigma0;
      TuneScore& score = result.table[static_cast<std::size_t>(li) * n_bd + bi];
      score.lambda = config.lambda;
      score.threshold = grid.thresholds[bi];
      score.tau1 = matrix_one_norm(gap);
      score.tau2 = spectral_norm(gap);
    }
  }

  bool first = true;
  for (const TuneScore& s : result.table) {
    const double value = grid.criterion == TuneCriterion::tau1 ? s.tau1 : s.tau2;
    const bool better = first || value < result.score ||
                        (value == result.score &&
                         (s.lambda > result.lambda || (s.lambda == result.lambda && s.threshold > result.threshold)));
    if (better) {
      result.lambda = s.lambda;
      result.threshold = s.threshold;
      result.score = value;
      first = false;
    }
  }
  return result;
}

}  // namespace gbvar
