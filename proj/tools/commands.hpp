#pragma once

#include "output.hpp"

#include <padic/levy_poisson.hpp>
#include <padic/pseudodiff.hpp>
#include <padic/qgaussian.hpp>
#include <padic/series.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace padic_cli {

using namespace padic;

// Returns 0 on success; throws ConfigError / CertificateFailure otherwise.
using Command = std::function<int(Run&)>;
const std::map<std::string, Command>& commands();

// shared config readers
struct Globals {
  unsigned p = 2;
  int precision = 32;
  int M = 3;
  int N = 3;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  unsigned workers = 1;
};
Globals globals(Config& cfg, int M = 3, int N = 3, std::size_t samples = 10000);

// "num", "num/den" or a full literal "p:..."
PAdicNumber padic_value(unsigned p, const std::string& text, int precision);
std::vector<PAdicNumber> padic_list(unsigned p, const std::string& text, int precision);
// c0 + c1 x + c2 x^2 + ... in variable `var` of an nvars polynomial ring
Poly poly_from_coeffs(unsigned p, int nvars, int var, const std::vector<PAdicNumber>& coeffs, int precision);
// "i,j:b; k:b2; :b0" (0-based axes)
SymbolSpec symbol_from_text(int d, const std::string& text);
// "center:radius_exponent:mass; ..."
std::vector<Cell> cells_from_text(unsigned p, const std::string& text, int precision);
// q-Gaussian block: q, diagonal of B (dimension = its length)
QGaussianSpec qgauss_spec(Config& cfg, const std::string& section, const Globals& g);

std::string literal(const PAdicNumber& x);
std::string literal(const std::vector<PAdicNumber>& x);  // coordinates joined by ';'

// registration, one per source file
void register_analysis(std::map<std::string, Command>& m);
void register_probability(std::map<std::string, Command>& m);
void register_geometry(std::map<std::string, Command>& m);

}  // namespace padic_cli
