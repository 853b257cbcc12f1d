#pragma once

#include <vector>

#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

enum class TuneCriterion { tau1, tau2 };

struct TuneGrid {
  std::vector<double> lambdas;
  std::vector<double> thresholds;
  TuneCriterion criterion = TuneCriterion::tau2;
  double train_fraction = 0.75;

  /// 15 log-spaced lambdas on [1e-7, 1e-1] and 16 thresholds on [0, 0.3].
  static TuneGrid defaults();
  void validate() const;
};

struct TuneScore {
  double lambda = 0.0;
  double threshold = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
};

struct TuneResult {
  double lambda = 0.0;
  double threshold = 0.0;
  double score = 0.0;
  std::vector<TuneScore> table;  // lambda-major, grid order
};

/// Max absolute column sum.
double matrix_one_norm(const Matrix& m);
/// Largest singular value by power iteration on M^T M (tol 1e-9, 500 iterations).
double spectral_norm(const Matrix& m);

/// Chronological train/test split: fit on the first floor(fraction * n) rows,
/// score |Sigma1_test - A Sigma0_test| on the rest. Ties go to the larger
/// lambda, then the larger threshold. Lambdas evaluate in parallel.
TuneResult tune(const BinaryPanel& panel, const TuneGrid& grid, const LassoConfig& base = {});

}  // namespace gbvar
