#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace padic_cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string qualify(const std::string& key) { return key.find('.') == std::string::npos ? "run." + key : key; }

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto s = trim(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("key '" + key + "': cannot read '" + text + "' as a number");
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config c;
  std::string section = "run", line;
  std::stringstream ss(text);
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty() || section.find_first_of(" .=") != std::string::npos)
        throw ConfigError(where + ": bad section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    if (key.empty() || key.find_first_of(" .") != std::string::npos) throw ConfigError(where + ": bad key");
    c.values_[section + "." + key] = trim(line.substr(eq + 1));
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) { values_[qualify(key)] = value; }

void Config::set_assignment(const std::string& a) {
  auto eq = a.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + a + "' is not key=value");
  set(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
}

bool Config::has(const std::string& key) const { return values_.count(qualify(key)) > 0; }

std::string Config::str(const std::string& key, const std::string& fallback) const {
  auto k = qualify(key);
  auto it = values_.find(k);
  auto v = it == values_.end() ? fallback : it->second;
  resolved_[k] = v;
  return v;
}

long long Config::integer(const std::string& key, long long fallback) const {
  auto k = qualify(key);
  auto it = values_.find(k);
  long long v = it == values_.end() ? fallback : parse_number<long long>(k, it->second);
  resolved_[k] = std::to_string(v);
  return v;
}

double Config::real(const std::string& key, double fallback) const {
  auto k = qualify(key);
  auto it = values_.find(k);
  double v = it == values_.end() ? fallback : parse_number<double>(k, it->second);
  resolved_[k] = fmt(v);
  return v;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  auto k = qualify(key);
  auto it = values_.find(k);
  auto v = it == values_.end() ? fallback : parse_list<double>(k, it->second);
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt(x);
  resolved_[k] = s;
  return v;
}

std::vector<long long> Config::integers(const std::string& key, const std::vector<long long>& fallback) const {
  auto k = qualify(key);
  auto it = values_.find(k);
  auto v = it == values_.end() ? fallback : parse_list<long long>(k, it->second);
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  resolved_[k] = s;
  return v;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (auto& [k, v] : values_)
    if (!resolved_.count(k)) out.push_back(k);
  return out;
}

}  // namespace padic_cli
