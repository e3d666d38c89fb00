#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic_cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// a numerical certificate did not hold; the report has already been written
struct CertificateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value text with [section] headers. Keys are stored as
// "section.key"; keys before any header live in "run".
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin = "<text>");

  void set(const std::string& key, const std::string& value);
  // "section.key=value" or "key=value" (run section)
  void set_assignment(const std::string& assignment);
  bool has(const std::string& key) const;

  std::string str(const std::string& key, const std::string& fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  double real(const std::string& key, double fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long long> integers(const std::string& key, const std::vector<long long>& fallback) const;

  // every key read or set, with the value used; this is what the manifest records
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  // keys that were given but never read
  std::vector<std::string> unused() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace padic_cli
