#include "archtest/csv.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace archtest {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, int line, int col) {
  try {
    std::size_t used;
    double v = std::stod(cell, &used);
    while (used < cell.size() &&
           std::isspace(static_cast<unsigned char>(cell[used]))) {
      ++used;
    }
    if (used != cell.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw CsvError("non-numeric cell '" + cell + "' in column " +
                       std::to_string(col + 1),
                   line);
  }
}

}  // namespace

Sample read_csv(std::istream& in, const CsvOptions& options) {
  Sample sample;
  std::string line;
  int line_no = 0;
  bool skip_header = options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (line.empty()) continue;
    auto cells = split(line, options.delimiter);
    int needed = std::max(options.col1, options.col2);
    if (static_cast<int>(cells.size()) <= needed) {
      throw CsvError("expected at least " + std::to_string(needed + 1) +
                         " columns, found " + std::to_string(cells.size()),
                     line_no);
    }
    sample.rows.push_back({parse_cell(cells[options.col1], line_no, options.col1),
                           parse_cell(cells[options.col2], line_no, options.col2)});
  }
  if (sample.n() < 2) {
    throw CsvError("need at least 2 data rows, found " +
                       std::to_string(sample.n()),
                   line_no);
  }
  return sample;
}

Sample read_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in, options);
}

void write_csv(const Sample& sample, std::ostream& out) {
  out << "u1,u2\n";
  out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : sample.rows) {
    out << row[0] << ',' << row[1] << '\n';
  }
}

}  // namespace archtest
