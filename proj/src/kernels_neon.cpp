#include "padic/kernels.hpp"

#include <arm_neon.h>

namespace padic::kernels::neon {

namespace {

inline float64x2_t mul1(float64x2_t a, float64x2_t b) {
  float64x2_t br = vdupq_laneq_f64(b, 0);
  float64x2_t bi = vdupq_laneq_f64(b, 1);
  float64x2_t as = vextq_f64(a, a, 1);
  const float64x2_t sign = {-1.0, 1.0};
  return vaddq_f64(vmulq_f64(a, br), vmulq_f64(vmulq_f64(as, bi), sign));
}

}  // namespace

void cmul(cplx* a, const cplx* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  auto* pb = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) vst1q_f64(pa + 2 * i, mul1(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i)));
}

void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n) {
  auto* py = reinterpret_cast<double*>(y);
  auto* px = reinterpret_cast<const double*>(x);
  const float64x2_t vc = {c.real(), c.imag()};
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(py + 2 * i, vaddq_f64(vld1q_f64(py + 2 * i), mul1(vc, vld1q_f64(px + 2 * i))));
}

void rscale(cplx* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t i = 0; i < n; ++i) vst1q_f64(pa + 2 * i, vmulq_f64(vld1q_f64(pa + 2 * i), vs));
}

double norm2(const cplx* a, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t v = vld1q_f64(pa + 2 * i);
    acc = vaddq_f64(acc, vmulq_f64(v, v));
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

double dot(const double* w, const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

}  // namespace padic::kernels::neon
