#include "padic/gamma.hpp"

#include <cmath>
#include <string>

namespace padic {

std::complex<double> cpow_p(unsigned p, std::complex<double> u) {
  return std::exp(u * std::log(static_cast<double>(p)));
}

std::complex<double> gamma_K(unsigned p, std::complex<double> u) {
  std::complex<double> den = 1.0 - cpow_p(p, -u);
  if (std::abs(den) < 1e-14)
    throw PoleError("Gamma_K has a pole at u = " + std::to_string(u.real()) + "+" + std::to_string(u.imag()) + "i");
  return (1.0 - cpow_p(p, u - 1.0)) / den;
}

}  // namespace padic
