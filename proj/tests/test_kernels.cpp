#include "doctest.h"
#include "support/gen.hpp"

#include "padic/kernels.hpp"

#include <cmath>
#include <vector>

using namespace padic;
using kernels::Isa;

namespace {

std::vector<cplx> random_cplx(Engine& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = {gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2)};
  return v;
}

struct Restore {
  Isa saved = kernels::active_isa();
  ~Restore() { kernels::force_isa(saved); }
};

void compare_with_scalar(Isa isa) {
  Restore restore;
  REQUIRE(kernels::force_isa(isa));
  Engine rng = make_stream(11, static_cast<std::uint64_t>(isa));
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 127u, 1000u}) {
    auto a = random_cplx(rng, n), b = random_cplx(rng, n);
    cplx c(gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1));
    double s = gen::uniform(rng, -3, 3);

    auto a1 = a, a2 = a;
    kernels::scalar::cmul(a1.data(), b.data(), n);
    kernels::cmul(a2.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(a1[i] - a2[i]) <= 1e-15 * (1 + std::abs(a1[i])));

    a1 = a, a2 = a;
    kernels::scalar::caxpy(a1.data(), c, b.data(), n);
    kernels::caxpy(a2.data(), c, b.data(), n);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(a1[i] - a2[i]) <= 1e-15 * (1 + std::abs(a1[i])));

    a1 = a, a2 = a;
    kernels::scalar::rscale(a1.data(), s, n);
    kernels::rscale(a2.data(), s, n);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(a1[i] == a2[i]);

    double r1 = kernels::scalar::norm2(a.data(), n), r2 = kernels::norm2(a.data(), n);
    REQUIRE(std::abs(r1 - r2) <= 1e-13 * (1 + r1));

    std::vector<double> w(n), x(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = gen::uniform(rng, 0, 1), x[i] = gen::uniform(rng, -1, 1);
    double d1 = kernels::scalar::dot(w.data(), x.data(), n), d2 = kernels::dot(w.data(), x.data(), n);
    REQUIRE(std::abs(d1 - d2) <= 1e-13 * (1 + std::abs(d1)));
  }
}

}  // namespace

TEST_CASE("scalar kernels agree with a direct loop") {
  Restore restore;
  kernels::force_isa(Isa::scalar);
  std::vector<cplx> a{{1, 2}, {3, -1}}, b{{0, 1}, {2, 2}};
  kernels::cmul(a.data(), b.data(), 2);
  CHECK(a[0] == cplx(-2, 1));
  CHECK(a[1] == cplx(8, 4));
  CHECK(kernels::norm2(b.data(), 2) == doctest::Approx(9.0));
}

TEST_CASE("vector variants match the scalar reference") {
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (!kernels::isa_available(isa)) {
      MESSAGE(kernels::isa_name(isa) << " not available on this machine; skipped");
      continue;
    }
    compare_with_scalar(isa);
  }
}

TEST_CASE("forcing a missing ISA falls back to scalar") {
  Restore restore;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (kernels::isa_available(isa)) continue;
    CHECK_FALSE(kernels::force_isa(isa));
    CHECK(kernels::active_isa() == Isa::scalar);
  }
}
