#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coulomb2d {

// Decimal text with 17 significant digits; round-trips doubles exactly.
std::string format_g17(double x);

// Minimal CSV writer: header row then %.17g cells, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& cells);
  const std::string& text() const { return text_; }
  void save(const std::string& path) const;

 private:
  size_t columns_;
  std::string text_;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// FNV-1a over the raw bytes; used to fingerprint configs in run manifests.
uint64_t fnv1a(const std::string& bytes);

}  // namespace coulomb2d
