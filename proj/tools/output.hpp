#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "discforge/error.hpp"

namespace discforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Collects artifacts of one run and writes each one via temp file + rename.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw config_error("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write_text(const std::string& name, const std::string& body) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw numerical_error("cannot open " + tmp.string() + " for writing");
      out << body;
      if (!out) throw numerical_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
    files_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt_double(row[k]);
      os << "\n";
    }
    write_text(name, os.str());
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace discforge::cli
