#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gbvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Sorted 0-based column indices.
using IndexSet = std::vector<int>;

}  // namespace gbvar
