#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include "tfpm/errors.hpp"

namespace tfpm {

/// CSV emitter: header row mandatory, UTF-8, LF line endings, floats written
/// with 17 significant digits so identical runs are byte-identical and values
/// round-trip exactly.
class CsvWriter {
public:
  explicit CsvWriter(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot open CSV output file " + path.string());
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void header(std::initializer_list<std::string_view> cols) {
    bool first = true;
    for (const auto c : cols) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::span<const double> vals) {
    bool first = true;
    for (const double v : vals) {
      if (!first) out_ << ',';
      out_ << format(v);
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> vals) {
    row(std::span<const double>(vals.begin(), vals.size()));
  }

  void close() { out_.close(); }

private:
  std::ofstream out_;
};

}  // namespace tfpm
