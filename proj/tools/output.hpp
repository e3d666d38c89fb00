#pragma once

#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace padic_cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Shortest round-trip text for a double.
std::string num(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& row(std::vector<std::string> cells);
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Collects the tables of one subcommand run and writes them next to a manifest.
class Run {
 public:
  Run(std::string command, Config& cfg);
  Config& config() { return cfg_; }
  const std::string& command() const { return command_; }
  std::filesystem::path out_dir() const { return out_; }

  // writes <out>/<command>[_<name>].csv
  void table(const std::string& name, const CsvTable& t);
  void record_artifact(const std::string& file) { artifacts_.push_back(file); }
  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
  // writes <out>/<command>.manifest.json; status is "ok", "certificate_failure" or "error"
  void finish(const std::string& status);

 private:
  std::string command_;
  Config& cfg_;
  std::filesystem::path out_;
  std::vector<std::string> artifacts_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

}  // namespace padic_cli
