#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "fmd/core.hpp"

namespace fmd {

// Shortest decimal string that round-trips to the same double. This is what
// every CSV cell uses, so a reader parsing the file recovers bit-identical
// values and repeated runs with the same seed produce byte-identical files.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Minimal CSV emitter: one fixed header, then rows of preformatted cells.
// Cells never need quoting here (numbers and plain tokens only).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header)
      : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
      throw ConfigError("CSV row width does not match the header");
    }
    rows_.push_back(std::move(cells));
  }

  std::string to_string() const {
    std::string out = join(header_);
    for (const auto& row : rows_) {
      out += '\n';
      out += join(row);
    }
    out += '\n';
    return out;
  }

  void write_file(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
      throw ConfigError("cannot open output file: " + path.string());
    }
    os << to_string();
    if (!os) {
      throw ConfigError("failed writing output file: " + path.string());
    }
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t k = 0; k < cells.size(); ++k) {
      if (k) line += ',';
      line += cells[k];
    }
    return line;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Output directory resolution: an explicit --out wins; otherwise the
// FMD_OUT_DIR environment variable; otherwise the current directory.
// The directory is created if missing.
inline std::filesystem::path resolve_output_dir(const std::string& explicit_dir) {
  std::filesystem::path dir;
  if (!explicit_dir.empty()) {
    dir = explicit_dir;
  } else if (const char* env = std::getenv("FMD_OUT_DIR"); env && *env) {
    dir = env;
  } else {
    dir = ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory: " + dir.string());
  }
  return dir;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + path.string());
  os << text;
  if (!os) throw ConfigError("failed writing output file: " + path.string());
}

}  // namespace fmd
