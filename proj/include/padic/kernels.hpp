#pragma once

// Data-parallel kernels behind the Fourier, convolution and quadrature code.
// Each kernel has a portable reference version and, where the build and the
// CPU allow it, an AVX2 or NEON version picked once at first use.

#include <complex>
#include <cstddef>
#include <string>

namespace padic::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

Isa active_isa();
// Pin the dispatch target (tests use this to compare variants). Asking for an
// ISA the machine lacks falls back to scalar and returns false.
bool force_isa(Isa isa);
bool isa_available(Isa isa);
std::string isa_name(Isa isa);

// a[i] *= b[i]
void cmul(cplx* a, const cplx* b, std::size_t n);
// y[i] += c * x[i]
void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n);
// a[i] *= s
void rscale(cplx* a, double s, std::size_t n);
// sum |a[i]|^2
double norm2(const cplx* a, std::size_t n);
// sum w[i] * x[i]
double dot(const double* w, const double* x, std::size_t n);

namespace scalar {
void cmul(cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n);
void rscale(cplx* a, double s, std::size_t n);
double norm2(const cplx* a, std::size_t n);
double dot(const double* w, const double* x, std::size_t n);
}  // namespace scalar

#if defined(PADIC_HAVE_AVX2)
namespace avx2 {
void cmul(cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n);
void rscale(cplx* a, double s, std::size_t n);
double norm2(const cplx* a, std::size_t n);
double dot(const double* w, const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(PADIC_HAVE_NEON)
namespace neon {
void cmul(cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n);
void rscale(cplx* a, double s, std::size_t n);
double norm2(const cplx* a, std::size_t n);
double dot(const double* w, const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace padic::kernels
