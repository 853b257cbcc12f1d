#include "gbvar/ingest.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "gbvar/error.hpp"

namespace gbvar {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

NumericTable read_numeric_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("input CSV is empty");
  NumericTable table;
  table.labels = split(line);
  const std::size_t cols = table.labels.size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != cols)
      throw FormatError("row " + std::to_string(rows.size() + 1) + " has " + std::to_string(cells.size()) +
                        " cells");
    rows.push_back(std::move(cells));
  }
  if (cols == 0) throw FormatError("input CSV header has no columns");
  if (rows.empty()) throw EmptyColumn(0);
  // A column blank in every row is reported as such rather than as its first cell.
  for (std::size_t k = 0; k < cols; ++k) {
    bool blank = true;
    for (const auto& cells : rows) blank = blank && cells[k].empty();
    if (blank) throw EmptyColumn(k);
  }

  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      const std::string& s = rows[r][k];
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) throw NonNumericCell(r, k);
      values.push_back(v);
    }
  }
  const std::size_t row = rows.size();
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(cols));
  return table;
}

namespace {

template <typename Rule>
BinaryPanel binarize(const NumericTable& table, Rule rule) {
  const Eigen::Index rows = table.values.rows();
  const Eigen::Index cols = table.values.cols();
  if (rows < 2) throw PanelTooShort(static_cast<std::size_t>(rows));
  BinaryPanel panel(static_cast<std::size_t>(rows - 1), static_cast<std::size_t>(cols));
  panel.labels = table.labels;
  for (Eigen::Index t = 1; t < rows; ++t)
    for (Eigen::Index k = 0; k < cols; ++k)
      panel(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(k)) =
          rule(table.values(t - 1, k), table.values(t, k), t, k) ? 1 : 0;
  return panel;
}

}  // namespace

BinaryPanel binarize_advance_decline(const NumericTable& table) {
  return binarize(table, [](double prev, double cur, Eigen::Index, Eigen::Index) { return cur > prev; });
}

BinaryPanel binarize_growth(const NumericTable& table, double pct) {
  if (!(pct >= 0.0)) throw InvalidArgument("growth threshold percent must be >= 0");
  const double factor = pct / 100.0;
  return binarize(table, [factor](double prev, double cur, Eigen::Index t, Eigen::Index k) {
    if (prev < 0.0 || cur < 0.0)
      throw InvalidArgument("negative flow at row " + std::to_string(prev < 0.0 ? t : t + 1) + " column " +
                            std::to_string(k + 1));
    if (prev == 0.0) return cur > 0.0;
    return (cur - prev) / prev > factor;
  });
}

}  // namespace gbvar
