#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace wavelab {

// Full round-trip precision, deterministic formatting.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RFC-4180-style writer; every file starts with a named header row and all
// numbers carry 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << "\r\n";
  }

  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_full(values[i]);
    }
    out_ << "\r\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace wavelab
