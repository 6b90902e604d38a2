#include "latitude/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "latitude/errors.hpp"

namespace latitude {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return errno == 0 && end == cell.c_str() + cell.size();
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_cells(line);
    std::vector<double> parsed(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], parsed[c])) numeric = false;
    }
    if (first) {
      cols = cells.size();
      first = false;
      if (!numeric) {
        table.column_names = cells;
        continue;
      }
    }
    if (cells.size() != cols) {
      throw ParseError("expected " + std::to_string(cols) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], parsed[c])) {
        throw ParseError("non-numeric cell '" + cells[c] + "'", line_no);
      }
      if (!std::isfinite(parsed[c])) {
        throw ParseError("non-finite cell '" + cells[c] + "'", line_no);
      }
    }
    values.insert(values.end(), parsed.begin(), parsed.end());
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows", line_no == 0 ? 1 : line_no);
  table.matrix = DenseMatrix(rows, cols, std::move(values));
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_csv(in);
}

DenseMatrix load_csv(const std::filesystem::path& path) {
  return read_csv_file(path).matrix;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const DenseMatrix& M) {
  for (std::size_t i = 0; i < M.rows(); ++i) {
    auto row = M.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const DenseMatrix& M) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  write_csv(out, M);
}

void save_vector_csv(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  for (double x : v) out << format_double(x) << '\n';
}

std::vector<double> load_vector_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    double v = 0.0;
    if (!parse_number(cell, v) || std::isnan(v)) {
      throw ParseError("non-numeric value '" + cell + "'", line_no);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("no values", line_no == 0 ? 1 : line_no);
  return out;
}

}  // namespace latitude
