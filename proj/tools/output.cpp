#include "output.hpp"

#include "json.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <sstream>

namespace padic_cli {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width does not match the header");
  rows_.push_back(std::move(cells));
  return *this;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (auto& r : rows_) line(r);
}

Run::Run(std::string command, Config& cfg) : command_(std::move(command)), cfg_(cfg) {
  out_ = cfg_.str("out", ".");
  std::error_code ec;
  std::filesystem::create_directories(out_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out_.string() + "'");
}

void Run::table(const std::string& name, const CsvTable& t) {
  auto file = command_ + (name.empty() ? "" : "_" + name) + ".csv";
  t.write(out_ / file);
  artifacts_.push_back(file);
}

void Run::finish(const std::string& status) {
  nlohmann::json cfg = nlohmann::json::object();
  for (auto& [k, v] : cfg_.resolved()) cfg[k] = v;
  // FNV-1a over the resolved config; equal hashes mean equal runs
  std::uint64_t h = 1469598103934665603ull;
  auto text = cfg.dump();
  for (unsigned char c : command_ + "\n" + text) h = (h ^ c) * 1099511628211ull;
  std::ostringstream hex;
  hex << std::hex << h;

  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

  nlohmann::json m;
  m["command"] = command_;
  m["artifact_version"] = kArtifactVersion;
  m["config"] = cfg;
  m["spec_hash"] = hex.str();
  m["artifacts"] = artifacts_;
  m["status"] = status;
  for (auto& [k, v] : notes_) m["notes"][k] = v;
  m["timestamp"] = stamp;
  std::ofstream out(out_ / (command_ + ".manifest.json"), std::ios::binary);
  out << m.dump(2) << '\n';
}

}  // namespace padic_cli
