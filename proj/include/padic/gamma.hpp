#pragma once

#include <complex>
#include <stdexcept>

namespace padic {

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// Gamma_K(u) = int |z|^(u-1) chi(z) dz over Q_p, continued in u by summing the
// shells |z| = p^k in closed form: (1 - p^(u-1)) / (1 - p^-u).
std::complex<double> gamma_K(unsigned p, std::complex<double> u);

// p^u for complex u
std::complex<double> cpow_p(unsigned p, std::complex<double> u);

}  // namespace padic
