#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gbvar/simulator.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

/// Numeric CSV with a header row of column labels.
struct NumericTable {
  std::vector<std::string> labels;
  Matrix values;  // rows x columns
};

NumericTable read_numeric_csv(std::istream& in);

/// X_{t,k} = 1 iff value_{t,k} > value_{t-1,k}; ties give 0. n rows in, n - 1 out.
BinaryPanel binarize_advance_decline(const NumericTable& table);

/// X_{t,k} = 1 iff the flow begins (previous 0, current > 0) or grows by more
/// than pct percent over a positive previous value. Negative values are rejected.
BinaryPanel binarize_growth(const NumericTable& table, double pct);

}  // namespace gbvar
