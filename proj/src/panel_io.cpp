#include "gbvar/panel_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gbvar/error.hpp"

namespace gbvar {

namespace {

constexpr std::array<char, 5> kMagic = {'G', 'B', 'V', 'P', '1'};

std::vector<std::string> split_csv_line(const std::string& line) {
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

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 4)) throw FormatError("truncated binary panel header");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void write_panel_csv(const BinaryPanel& panel, std::ostream& out) {
  const auto labels = panel.column_labels();
  for (std::size_t k = 0; k < panel.d; ++k) out << (k ? "," : "") << labels[k];
  out << '\n';
  std::string line;
  for (std::size_t t = 0; t < panel.n; ++t) {
    line.clear();
    for (std::size_t k = 0; k < panel.d; ++k) {
      if (k) line.push_back(',');
      line.push_back(panel(t, k) ? '1' : '0');
    }
    line.push_back('\n');
    out << line;
  }
}

BinaryPanel read_panel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("panel CSV is empty");
  BinaryPanel panel;
  panel.labels = split_csv_line(line);
  panel.d = panel.labels.size();
  if (panel.d == 0) throw FormatError("panel CSV header has no columns");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != panel.d)
      throw FormatError("row " + std::to_string(row + 1) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(panel.d));
    for (std::size_t k = 0; k < panel.d; ++k) {
      if (cells[k] == "0") {
        panel.data.push_back(0);
      } else if (cells[k] == "1") {
        panel.data.push_back(1);
      } else {
        throw NotBinary(row, k);
      }
    }
    ++row;
  }
  panel.n = row;
  return panel;
}

void write_panel_binary(const BinaryPanel& panel, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(panel.n));
  put_u32(out, static_cast<std::uint32_t>(panel.d));
  const std::size_t row_bytes = (panel.d + 7) / 8;
  std::vector<char> packed(row_bytes);
  for (std::size_t t = 0; t < panel.n; ++t) {
    std::fill(packed.begin(), packed.end(), 0);
    for (std::size_t k = 0; k < panel.d; ++k)
      if (panel(t, k)) packed[k / 8] = static_cast<char>(packed[k / 8] | (1 << (k % 8)));
    out.write(packed.data(), static_cast<std::streamsize>(row_bytes));
  }
}

BinaryPanel read_panel_binary(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("missing GBVP1 magic");
  const std::uint32_t n = get_u32(in);
  const std::uint32_t d = get_u32(in);
  BinaryPanel panel(n, d);
  const std::size_t row_bytes = (static_cast<std::size_t>(d) + 7) / 8;
  std::vector<unsigned char> packed(row_bytes);
  for (std::size_t t = 0; t < n; ++t) {
    if (!in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(row_bytes)))
      throw FormatError("truncated binary panel body");
    for (std::size_t k = 0; k < d; ++k) panel(t, k) = (packed[k / 8] >> (k % 8)) & 1U;
  }
  return panel;
}

BinaryPanel load_panel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open panel file " + path.string());
  std::array<char, 5> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 5 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_panel_binary(in) : read_panel_csv(in);
}

void save_panel(const BinaryPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write panel file " + path.string());
  if (path.extension() == ".gbvp") {
    write_panel_binary(panel, out);
  } else {
    write_panel_csv(panel, out);
  }
}

}  // namespace gbvar
