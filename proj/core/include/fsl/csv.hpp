#pragma once

// Minimal CSV emission with a fixed floating-point format (12 significant
// digits, printf %.12g) so that identical runs produce byte-identical files.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace fsl::io {

// printf("%.12g") rendering of a double.
std::string g12(double v);

std::string join_csv(const std::vector<std::string>& cells);

class CsvFile {
 public:
  // Throws ConfigError when the path cannot be opened for writing.
  explicit CsvFile(const std::filesystem::path& path);

  void header(const std::vector<std::string>& names);
  // All-numeric row in %.12g format.
  void row(const std::vector<double>& values);
  // Pre-rendered row for mixed integer/text columns.
  void raw_row(const std::vector<std::string>& cells);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace fsl::io
