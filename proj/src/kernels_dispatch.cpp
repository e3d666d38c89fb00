#include "padic/kernels.hpp"

#include <atomic>

namespace padic::kernels {

namespace {

Isa detect() {
#if defined(PADIC_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
#if defined(PADIC_HAVE_NEON)
  return Isa::neon;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(PADIC_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(PADIC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
  bool ok = isa_available(isa);
  current().store(ok ? isa : Isa::scalar);
  return ok;
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

#if defined(PADIC_HAVE_AVX2) && defined(PADIC_HAVE_NEON)
#error "AVX2 and NEON variants are mutually exclusive"
#endif

#if defined(PADIC_HAVE_AVX2)
#define PADIC_VECTOR_NS avx2
#define PADIC_VECTOR_ISA Isa::avx2
#elif defined(PADIC_HAVE_NEON)
#define PADIC_VECTOR_NS neon
#define PADIC_VECTOR_ISA Isa::neon
#endif

#if defined(PADIC_VECTOR_NS)
#define PADIC_DISPATCH(fn, ...) \
  return active_isa() == PADIC_VECTOR_ISA ? PADIC_VECTOR_NS::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define PADIC_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void cmul(cplx* a, const cplx* b, std::size_t n) { PADIC_DISPATCH(cmul, a, b, n); }
void caxpy(cplx* y, cplx c, const cplx* x, std::size_t n) { PADIC_DISPATCH(caxpy, y, c, x, n); }
void rscale(cplx* a, double s, std::size_t n) { PADIC_DISPATCH(rscale, a, s, n); }
double norm2(const cplx* a, std::size_t n) { PADIC_DISPATCH(norm2, a, n); }
double dot(const double* w, const double* x, std::size_t n) { PADIC_DISPATCH(dot, w, x, n); }

}  // namespace padic::kernels
