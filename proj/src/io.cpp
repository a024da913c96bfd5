#include "coulomb2d/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "coulomb2d/types.hpp"

namespace coulomb2d {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
  require(cells.size() == columns_, Errc::BadParameters, "csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_g17(cells[i]);
  }
  text_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_file(path, text_); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::ConfigError, "cannot open " + path + " for writing");
  out << content;
  require(out.good(), Errc::ConfigError, "short write to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::ConfigError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

}  // namespace coulomb2d
