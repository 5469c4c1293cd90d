#include "optomech/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace optomech {

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string CsvTable::render(const std::string& title) const {
  std::ostringstream out;
  // Double hash for the title so that stripping the "# " prefix from the
  // remaining comment lines yields exactly the run configuration.
  out << "## " << title << "\n";
  for (const std::string& line : config_echo) out << "# " << line << "\n";
  for (size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  }
  const bool annotated = !row_annotations.empty();
  if (annotated) out << ",annotations";
  out << "\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      out << format_full(rows[r][c]) << (c + 1 < rows[r].size() ? "," : "");
    }
    if (annotated) out << ",\"" << row_annotations[r] << "\"";
    out << "\n";
  }
  return out.str();
}

}  // namespace optomech
