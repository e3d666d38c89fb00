#include "doctest.h"
#include "support/gen.hpp"
#include "support/oracles.hpp"

#include "padic/gamma.hpp"
#include "padic/pseudodiff.hpp"
#include "padic/qgaussian.hpp"

#include <cmath>

using namespace padic;

namespace {

GridFunction indicator(unsigned p, int M, int N, int k) {
  GridFunction f(p, 1, M, N);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = f.axis_norm(i) <= std::pow(double(p), k) ? 1.0 : 0.0;
  return f;
}

// brute-force multiplier transform: direct character sums on both sides
GridFunction naive_vladimirov(const GridFunction& f, double u) {
  GridFunction F = oracle::naive_fourier(f);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= i == 0 ? (u == 0 ? 1.0 : 0.0) : std::pow(F.axis_norm(i), u);
  return oracle::naive_fourier(F, true);
}

}  // namespace

TEST_CASE("symbol evaluation and ellipticity") {
  SymbolSpec A(2);
  A.add({}, 0.5).add({0, 0}, 2.0).add({0, 1}, 0.25).add({1, 1}, 1.0);
  std::vector<double> y{0.5, 2.0};
  // Atilde(y) = -sum (-i)^k b y..., even k only: k = 0 gives -b, k = 2 gives +b y y
  double direct = -0.5 + 2.0 * 0.25 + 0.25 * 1.0 + 1.0 * 4.0;
  CHECK(A.eval(y).real() == doctest::Approx(direct));
  CHECK(A.eval(y).imag() == doctest::Approx(0.0));
  CHECK(A.order() == 2);
  CHECK(SymbolSpec::laplacian_1d().certify().strictly_elliptic);
  CHECK_FALSE(SymbolSpec::laplacian_1d(-1.0).certify().elliptic);
  SymbolSpec odd(1);
  odd.add({0}, 1.0).add({0, 0}, 1.0);
  CHECK(odd.has_odd_terms());
  CHECK_FALSE(odd.certify().elliptic);
}

TEST_CASE("vladimirov examples") {
  Engine rng = make_stream(31, 0);
  auto f = gen::grid(rng, 3, 1, 2, 2);
  CHECK(max_abs_diff(vladimirov_apply(f, 0.0, 0), f) < 1e-13);
  auto one = indicator(2, 2, 2, 0);
  CHECK(max_abs_diff(vladimirov_apply(one, 1.0, 0), naive_vladimirov(one, 1.0)) < 1e-12);
  auto g = gen::grid(rng, 2, 1, 2, 2);
  CHECK(max_abs_diff(vladimirov_apply(g, 1.5, 0), naive_vladimirov(g, 1.5)) < 1e-12);
}

TEST_CASE("vladimirov composition and translation") {
  Engine rng = make_stream(32, 0);
  for (int i = 0; i < 30; ++i) {
    unsigned p = gen::prime(rng);
    auto f = gen::grid(rng, p, p == 2 ? 2 : 1, 2, 2);
    int axis = gen::uniform_int(rng, 0, f.dim() - 1);
    double u1 = gen::uniform(rng, 0, 2), u2 = gen::uniform(rng, 0, 2);
    auto lhs = vladimirov_apply(vladimirov_apply(f, u2, axis), u1, axis);
    REQUIRE(max_abs_diff(lhs, vladimirov_apply(f, u1 + u2, axis)) < 1e-9);
    std::vector<PAdicNumber> a;
    for (int k = 0; k < f.dim(); ++k)
      a.push_back(f.axis_point(static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(f.side()) - 1))));
    auto t1 = vladimirov_apply(translate(f, a), u1, axis);
    auto t2 = translate(vladimirov_apply(f, u1, axis), a);
    REQUIRE(max_abs_diff(t1, t2) < 1e-10);
  }
}

TEST_CASE("eigenrelation for windowed powers, modulo constants") {
  for (auto [n, u] : {std::pair{1, 0.5}, {2, 1.0}, {3, 1.5}}) {
    for (unsigned p : {2u, 3u}) {
      auto r = oracle::vladimirov_eigen_check(p, 4, 4, n, u);
      INFO("p=" << p << " n=" << n << " u=" << u);
      CHECK(r.radii >= 3);
      CHECK(r.worst < 0.01);
    }
  }
}

TEST_CASE("operator routes") {
  Engine rng = make_stream(33, 0);
  auto f = gen::grid(rng, 3, 1, 2, 2);
  SymbolSpec c(1);
  c.add({}, 2.5);
  // k = 0: A = b0 and the operator is multiplication by b0
  CHECK(max_abs_diff(operator_apply(c, f), [&] {
          auto g = f;
          for (auto& v : g.values()) v *= 2.5;
          return g;
        }()) < 1e-13);
  auto lap = SymbolSpec::laplacian_1d(0.7);
  auto twice = vladimirov_apply(vladimirov_apply(f, 1.0, 0), 1.0, 0);
  for (auto& v : twice.values()) v *= -0.7;
  CHECK(max_abs_diff(operator_apply(lap, f), twice) < 1e-12);
  for (int i = 0; i < 10; ++i) {
    SymbolSpec A(2);
    A.add({}, gen::uniform(rng, -1, 1));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) A.add({a, b}, gen::uniform(rng, -1, 1));
    A.add({0, 1, 1, 0}, gen::uniform(rng, -1, 1));
    auto g = gen::grid(rng, 2, 2, 2, 2);
    REQUIRE(max_abs_diff(operator_apply(A, g), operator_apply_multiplier(A, g)) < 1e-9);
  }
}

TEST_CASE("heat measure") {
  HeatMeasureSpec spec{1.0, SymbolSpec::laplacian_1d(), 2, 6, 6};
  auto dens = heat_measure(spec);
  CHECK(std::abs(haar_integral(dens) - 1.0) < 1e-6);
  double min_re = 0.0, max_im = 0.0, worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i) {
    min_re = std::min(min_re, dens[i].real());
    max_im = std::max(max_im, std::abs(dens[i].imag()));
    double o = oracle::qgauss_coset_density(2, 2.0, 1.0, 6, dens.axis_norm(i));
    worst = std::max(worst, std::abs(dens[i].real() - o));
    peak = std::max(peak, o);
  }
  CHECK(min_re > -1e-8);
  CHECK(max_im < 1e-10);
  // aliasing of the mass outside B(0, p^M) is the only difference
  CHECK(worst < 1e-3 * peak);

  HeatMeasureSpec tiny{1e-12, SymbolSpec::laplacian_1d(), 2, 3, 3};
  auto delta = indicator(2, 3, 3, -3);
  for (auto& v : delta.values()) v *= 8.0;
  CHECK(max_abs_diff(heat_measure(tiny), delta) < 1e-6);

  HeatMeasureSpec bad{1.0, SymbolSpec::laplacian_1d(-1.0), 2, 3, 3};
  CHECK_THROWS_AS(heat_measure(bad), NotElliptic);
  HeatMeasureSpec wide{400.0, SymbolSpec::laplacian_1d(), 2, 1, 3};
  CHECK_THROWS_AS(heat_measure(wide), MassDeficit);
  HeatMeasureSpec negative{-1.0, SymbolSpec::laplacian_1d(), 2, 3, 3};
  CHECK_THROWS(heat_measure(negative));
}

TEST_CASE("heat semigroup and solver") {
  auto sym = SymbolSpec::laplacian_1d();
  HeatMeasureSpec s1{0.4, sym, 3, 4, 4}, s2{0.9, sym, 3, 4, 4}, s12{1.3, sym, 3, 4, 4};
  auto d1 = heat_measure(s1), d2 = heat_measure(s2), d12 = heat_measure(s12);
  CHECK(max_abs_diff(convolve(d1, d2), d12) < 1e-8);
  CHECK(max_abs_diff(heat_solve(d1, s2), d12) < 1e-8);

  HeatMeasureSpec half{0.5, sym, 2, 6, 2};
  auto u0 = indicator(2, 6, 2, 0);
  CHECK(max_abs_diff(heat_solve(u0, half), oracle::naive_convolve(u0, heat_measure(half))) < 1e-10);

  Engine rng = make_stream(34, 0);
  auto f = gen::grid(rng, 2, 1, 4, 4);
  HeatMeasureSpec tiny{1e-9, sym, 2, 4, 4};
  CHECK(max_abs_diff(heat_solve(f, tiny), f) < 1e-6);
}

TEST_CASE("Cauchy problem residual") {
  SymbolSpec A(2);
  A.add({0, 0}, 1.0).add({1, 1}, 0.5).add({}, -0.2);
  REQUIRE(A.certify().elliptic);
  Engine rng = make_stream(35, 0);
  auto u0 = gen::grid(rng, 2, 2, 4, 1);
  const double t = 0.15, h = 1e-3;
  auto at = [&](double s) { return heat_solve(u0, HeatMeasureSpec{s, A, 2, 4, 1}); };
  auto u = at(t), up = at(t + h), um = at(t - h);
  auto Au = operator_apply(A, u);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    std::size_t i = static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(u.size()) - 1));
    cplx dt = (up[i] - um[i]) / (2 * h);
    worst = std::max(worst, std::abs(dt - Au[i]) / std::max(1e-12, std::abs(Au[i])));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("heat kernel equals the 2-Gaussian") {
  for (unsigned p : {2u, 3u}) {
    double t = 0.8;
    HeatMeasureSpec hs{t, SymbolSpec::laplacian_1d(), p, p == 2 ? 5 : 4, 3};
    QGaussianSpec qs;
    qs.p = p;
    qs.q = 2.0;
    qs.B = Eigen::MatrixXd::Constant(1, 1, t);
    qs.M = p == 2 ? 5 : 4;
    qs.N = 3;
    CHECK(max_abs_diff(heat_measure(hs), density(qs)) < 1e-10);
  }
}
