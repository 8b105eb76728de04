#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"

namespace mhdlab {

// Comma-separated output, '.' decimal, full double precision (17 significant
// digits), mandatory header row, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : os_(path, std::ios::trunc) {
    if (!os_) throw ConfigError("cannot open CSV for writing: " + path);
  }

  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
      os_ << (i ? "," : "") << names[i];
    os_ << "\n";
  }

  void row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) os_ << ',';
      os_ << num(values[i]);
    }
    os_ << "\n";
  }

  void raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::ofstream os_;
};

}  // namespace mhdlab
