#include "padic/kernels.hpp"

#include <immintrin.h>

namespace padic::kernels::avx2 {

namespace {

// two complex numbers per register: [r0 i0 r1 i1]
inline __m256d mul2(__m256d a, __m256d b) {
  __m256d br = _mm256_movedup_pd(b);       // r r
  __m256d bi = _mm256_permute_pd(b, 0xF);  // i i
  __m256d as = _mm256_permute_pd(a, 0x5);  // swap re/im of a
  return _mm256_addsub_pd(_mm256_mul_pd(a, br), _mm256_mul_pd(as, bi));
}

}  // namespace

void cmul(cplx* a, const cplx* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  auto* pb = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(pa + 2 * i, mul2(va, vb));
  }
  if (i < n) scalar::cmul(a + i, b + i, n - i);
}

void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n) {
  auto* py = reinterpret_cast<double*>(y);
  auto* px = reinterpret_cast<const double*>(x);
  const __m256d vc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, mul2(vc, vx)));
  }
  if (i < n) scalar::caxpy(y + i, c, x + i, n - i);
}

void rscale(cplx* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) _mm256_storeu_pd(pa + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i), vs));
  if (i < n) scalar::rscale(a + i, s, n - i);
}

double norm2(const cplx* a, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  if (i < n) s += scalar::norm2(a + i, n - i);
  return s;
}

double dot(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

}  // namespace padic::kernels::avx2
