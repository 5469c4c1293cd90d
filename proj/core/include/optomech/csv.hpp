#ifndef OPTOMECH_CSV_HPP
#define OPTOMECH_CSV_HPP

#include <string>
#include <vector>

namespace optomech {

// Writes `content` to `path` atomically (temp file in the same directory,
// then rename). Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

// CSV with a stable schema: '#'-prefixed comment lines carrying the exact
// run configuration (round-trippable after stripping the prefix), one header
// row, then full-precision decimal rows. Cells that are NaN are written as
// "nan"; a trailing annotation column, when present, is written verbatim.
struct CsvTable {
  std::vector<std::string> config_echo;  // serialized config, line by line
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_annotations;  // optional, size 0 or rows.size()

  std::string render(const std::string& title) const;
};

std::string format_full(double x);  // %.17g, stable across runs

}  // namespace optomech

#endif  // OPTOMECH_CSV_HPP
