#pragma once

#include <filesystem>
#include <iosfwd>

#include "gbvar/simulator.hpp"

namespace gbvar {

/// CSV: one header row of column labels, then n rows of 0/1.
void write_panel_csv(const BinaryPanel& panel, std::ostream& out);
BinaryPanel read_panel_csv(std::istream& in);

/// Compact binary: magic "GBVP1", little-endian u32 n, u32 d, then n rows,
/// each packed LSB-first into ceil(d/8) bytes. Labels are not stored.
void write_panel_binary(const BinaryPanel& panel, std::ostream& out);
BinaryPanel read_panel_binary(std::istream& in);

/// Chooses the format from the file: binary when it starts with the magic
/// bytes (read) or the path ends in ".gbvp" (write), CSV otherwise.
BinaryPanel load_panel(const std::filesystem::path& path);
void save_panel(const BinaryPanel& panel, const std::filesystem::path& path);

}  // namespace gbvar
