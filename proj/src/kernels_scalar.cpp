#include "padic/kernels.hpp"

namespace padic::kernels::scalar {

// Written out by hand: std::complex multiplication carries NaN recovery
// branches that block vectorisation and change rounding order.
void cmul(cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double ar = a[i].real(), ai = a[i].imag();
    double br = b[i].real(), bi = b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n) {
  const double cr = c.real(), ci = c.imag();
  for (std::size_t i = 0; i < n; ++i) {
    double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (cr * xr - ci * xi), y[i].imag() + (cr * xi + ci * xr));
  }
}

void rscale(cplx* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = cplx(a[i].real() * s, a[i].imag() * s);
}

double norm2(const cplx* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

double dot(const double* w, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i];
  return acc;
}

}  // namespace padic::kernels::scalar
