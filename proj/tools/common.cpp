#include "commands.hpp"

#include <sstream>

namespace padic_cli {

const std::map<std::string, Command>& commands() {
  static const auto table = [] {
    std::map<std::string, Command> m;
    register_analysis(m);
    register_probability(m);
    register_geometry(m);
    return m;
  }();
  return table;
}

Globals globals(Config& cfg, int M, int N, std::size_t samples) {
  Globals g;
  auto p = cfg.integer("p", 2);
  if (p < 2 || p > 1000 || !is_prime(static_cast<unsigned>(p))) throw ConfigError("p must be a prime below 1000");
  g.p = static_cast<unsigned>(p);
  g.precision = static_cast<int>(cfg.integer("precision", 32));
  if (g.precision < 4 || g.precision > 512) throw ConfigError("precision must lie in [4, 512]");
  set_default_precision(g.precision);
  g.M = static_cast<int>(cfg.integer("level_m", M));
  g.N = static_cast<int>(cfg.integer("level_n", N));
  if (g.M < 0 || g.N < 0 || g.M + g.N > 24) throw ConfigError("levels must satisfy 0 <= M, N and M + N <= 24");
  g.seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
  auto s = cfg.integer("samples", static_cast<long long>(samples));
  if (s < 1) throw ConfigError("samples must be positive");
  g.samples = static_cast<std::size_t>(s);
  auto w = cfg.integer("workers", 1);
  if (w < 1 || w > 256) throw ConfigError("workers must lie in [1, 256]");
  g.workers = static_cast<unsigned>(w);
  return g;
}

PAdicNumber padic_value(unsigned p, const std::string& text, int precision) {
  auto t = text;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  try {
    if (t.find(':') != std::string::npos) {
      auto x = PAdicNumber::parse(t, precision);
      if (x.prime() != p) throw ConfigError("literal '" + t + "' has the wrong prime");
      return x;
    }
    return PAdicNumber::parse(std::to_string(p) + ":" + t, precision);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad p-adic value '" + t + "': " + e.what());
  }
}

std::vector<PAdicNumber> padic_list(unsigned p, const std::string& text, int precision) {
  std::vector<PAdicNumber> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(padic_value(p, item, precision));
  if (out.empty()) throw ConfigError("empty list of p-adic values");
  return out;
}

Poly poly_from_coeffs(unsigned p, int nvars, int var, const std::vector<PAdicNumber>& coeffs, int precision) {
  Poly x = Poly::variable(p, nvars, var, precision);
  Poly power = Poly::constant(p, nvars, PAdicNumber::from_int(p, 1, precision));
  Poly out = Poly::constant(p, nvars, PAdicNumber::from_int(p, 0, precision));
  for (const auto& c : coeffs) {
    out = out + power.scaled(c);
    power = power * x;
  }
  return out;
}

SymbolSpec symbol_from_text(int d, const std::string& text) {
  SymbolSpec s(d);
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, ';')) {
    if (term.find_first_not_of(" \t") == std::string::npos) continue;
    auto colon = term.find(':');
    if (colon == std::string::npos) throw ConfigError("symbol term '" + term + "' lacks ':'");
    std::vector<int> index;
    std::stringstream is(term.substr(0, colon));
    std::string axis;
    while (std::getline(is, axis, ',')) {
      if (axis.find_first_not_of(" \t") == std::string::npos) continue;
      int k = 0;
      try {
        k = std::stoi(axis);
      } catch (const std::exception&) {
        throw ConfigError("bad axis '" + axis + "'");
      }
      if (k < 0 || k >= d) throw ConfigError("axis " + axis + " out of range");
      index.push_back(k);
    }
    try {
      s.add(index, std::stod(term.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad coefficient in '" + term + "'");
    }
  }
  if (s.terms().empty()) throw ConfigError("symbol has no terms");
  return s;
}

std::vector<Cell> cells_from_text(unsigned p, const std::string& text, int precision) {
  std::vector<Cell> cells;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("cell '" + item + "' is not center:radius_exponent:mass");
    try {
      cells.push_back({Ball(padic_value(p, parts[0], precision), std::stoi(parts[1])), std::stod(parts[2])});
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("cell '" + item + "' is not center:radius_exponent:mass");
    }
  }
  try {
    check_paving(p, cells);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("paving: ") + e.what());
  }
  return cells;
}

QGaussianSpec qgauss_spec(Config& cfg, const std::string& section, const Globals& g) {
  QGaussianSpec s;
  s.p = g.p;
  s.M = g.M;
  s.N = g.N;
  s.q = cfg.real(section + ".q", 2.0);
  if (!(s.q > 0)) throw ConfigError(section + ".q must be positive");
  auto b = cfg.reals(section + ".b", {1.0});
  s.B = Eigen::MatrixXd::Zero(b.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) s.B(i, i) = b[i];
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("covariance: ") + e.what());
  }
  return s;
}

std::string literal(const PAdicNumber& x) { return x.to_string(); }

std::string literal(const std::vector<PAdicNumber>& x) {
  std::string s;
  for (const auto& v : x) s += (s.empty() ? "" : ";") + v.to_string();
  return s;
}

}  // namespace padic_cli
