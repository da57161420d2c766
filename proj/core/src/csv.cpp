#include "fsl/csv.hpp"

#include "fsl/errors.hpp"

#include <cstdio>

namespace fsl::io {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

CsvFile::CsvFile(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw ConfigError("cannot open for writing: " + path.string());
}

void CsvFile::header(const std::vector<std::string>& names) {
  out_ << join_csv(names) << '\n';
}

void CsvFile::row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += g12(values[i]);
  }
  out_ << line << '\n';
}

void CsvFile::raw_row(const std::vector<std::string>& cells) {
  out_ << join_csv(cells) << '\n';
}

}  // namespace fsl::io
