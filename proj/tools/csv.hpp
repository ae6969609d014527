#pragma once

// Minimal CSV reading and writing for the tool's fixed-column outputs.
// Numbers are written in shortest round-trip form so output is byte-stable.

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace roomgreen::cli {

std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header name; throws InputError when missing.
  std::size_t column(const std::string& name) const;
  bool has(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace roomgreen::cli
