#ifndef ARCHTEST_CSV_HPP
#define ARCHTEST_CSV_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "archtest/empirical_copula.hpp"

namespace archtest {

struct CsvOptions {
  bool has_header = false;
  char delimiter = ',';
  int col1 = 0;  // 0-based column indices
  int col2 = 1;
};

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Reads two numeric columns into a Sample. Line numbers in errors are
// 1-based and count every physical line, header included.
Sample read_csv(std::istream& in, const CsvOptions& options = {});
Sample read_csv_file(const std::string& path, const CsvOptions& options = {});

// Writes "u1,u2" rows with full double precision.
void write_csv(const Sample& sample, std::ostream& out);

}  // namespace archtest

#endif  // ARCHTEST_CSV_HPP
