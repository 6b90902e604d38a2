#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "latitude/matrix.hpp"

namespace latitude {

struct CsvTable {
  DenseMatrix matrix;
  /// Header names; empty when the file has no header row.
  std::vector<std::string> column_names;
};

/// Parses a rectangular numeric CSV. The first row is taken as a header when
/// any of its cells is not a number. Throws ParseError with the 1-based line.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);
DenseMatrix load_csv(const std::filesystem::path& path);

/// %.17g, enough digits to round-trip every double.
std::string format_double(double v);

void write_csv(std::ostream& out, const DenseMatrix& M);
void save_csv(const std::filesystem::path& path, const DenseMatrix& M);
/// One value per line.
void save_vector_csv(const std::filesystem::path& path, std::span<const double> v);
/// Reads one value per line. Unlike matrices, +-inf is accepted (the
/// parameter files of a plain-product fit hold -inf).
std::vector<double> load_vector_csv(const std::filesystem::path& path);

}  // namespace latitude
