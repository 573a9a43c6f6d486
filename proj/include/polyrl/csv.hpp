#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace polyrl {

// Thrown on file/parse failures; mapped to exit code 3 by the CLI.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; NaN serializes to the empty field.
std::string format_double(double v);
std::string format_long(long v);

// Row assembly: comma separated, LF line endings.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);
  void field(const std::string& s);
  void field(double v) { field(format_double(v)); }
  void field(long v) { field(format_long(v)); }
  void field(int v) { field(static_cast<long>(v)); }
  void end_row();
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  size_t columns_;
  size_t in_row_ = 0;
};

// Writes via a temp file and rename so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Whole-file CSV parse (no quoting; fields never contain commas here).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

double parse_double_field(const std::string& s);  // empty -> NaN

}  // namespace polyrl
