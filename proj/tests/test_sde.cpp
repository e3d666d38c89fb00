#include "doctest.h"
#include "support/gen.hpp"

#include "padic/sde.hpp"

#include <cmath>

using namespace padic;

namespace {

constexpr int W = 32;

PAdicNumber I(unsigned p, long long v) { return PAdicNumber::from_int(p, v, W); }
double tol(unsigned p) { return std::pow(double(p), -(W - 4)); }

double dist(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).norm());
  return m;
}

Poly cst(unsigned p, int nvars, long long v) { return Poly::constant(p, nvars, I(p, v)); }
Poly var(unsigned p, int nvars, int i) { return Poly::variable(p, nvars, i, W); }

WienerSampler sampler(unsigned p) {
  QGaussianSpec qs;
  qs.p = p;
  qs.q = 2.0;
  qs.M = 0;
  qs.N = 3;
  return WienerSampler(qs);
}

// quadratic map Q_p^d -> Q_p^d with small random integer coefficients
PolyMap random_quadratic(Engine& rng, unsigned p, int d) {
  PolyMap f;
  for (int i = 0; i < d; ++i) {
    Poly g = cst(p, d, gen::uniform_int(rng, -5, 5));
    for (int j = 0; j < d; ++j) {
      g = g + var(p, d, j).scaled(I(p, gen::uniform_int(rng, -5, 5)));
      for (int k = j; k < d; ++k) g = g + (var(p, d, j) * var(p, d, k)).scaled(I(p, gen::uniform_int(rng, -5, 5)));
    }
    f.push_back(g);
  }
  return f;
}

}  // namespace

TEST_CASE("time grid") {
  TimeGrid g(3, I(3, 2), 1, 4);
  CHECK(g.size() == 81);
  CHECK(g.time(0) == I(3, 2));
  CHECK(g.time(5) == I(3, 2 + 15));
  for (std::size_t tau = 0; tau < g.size(); ++tau) {
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= m; ++n) REQUIRE(g.sigma(g.sigma(tau, m), n) == g.sigma(tau, n));
    REQUIRE(g.sigma(tau, g.digits(tau)) == tau);
    REQUIRE(g.monna(tau) >= 0.0);
    REQUIRE(g.monna(tau) < 1.0);
    if (tau > 0) {
      REQUIRE(g.digits(g.parent(tau)) < g.digits(tau));
      REQUIRE(g.parent(tau) == g.sigma(tau, g.digits(tau) - 1));
    }
    // level-n balls of the time domain: |t - sigma_n t| <= p^-(r+n)
    for (int n = 0; n <= 4; ++n) REQUIRE((g.time(tau) - g.time(g.sigma(tau, n))).norm() <= std::pow(3.0, -(1 + n)));
  }
  CHECK(g.monna(1) == doctest::Approx(1.0 / 3));
  CHECK(g.monna(3) == doctest::Approx(1.0 / 9));
}

TEST_CASE("partition sums") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 1), 1, 4);
  auto zw = zero_driver(g, 1, W);
  for (std::size_t tau : {0u, 7u, 40u, 80u}) {
    auto v = phat_integral(cst(p, 1, 5), g, {}, nullptr, 0, tau, 4);
    CHECK(v == I(p, 5) * (g.time(tau) - g.t0));
    CHECK(phat_integral(cst(p, 1, 5), g, {}, &zw, 0, tau, 4).is_zero());
  }
  Engine rng = make_stream(71, 0);
  for (int i = 0; i < 20; ++i) {
    auto h = gen::poly(rng, p, 1, 3, 4, 0, W);
    std::size_t tau = static_cast<std::size_t>(gen::uniform_int(rng, 0, 80));
    for (int level = 0; level < 4; ++level) {
      auto a = phat_integral(h, g, {}, nullptr, 0, tau, level), b = phat_integral(h, g, {}, nullptr, 0, tau, level + 1);
      REQUIRE((a - b).norm() <= h.gauss_norm(0) * std::pow(double(p), -(1 + level)) * (1 + 1e-12));
    }
  }
  DriverPath short_driver{1, {{I(p, 0)}}};
  CHECK_THROWS_AS(phat_integral(cst(p, 1, 1), g, {}, &short_driver, 0, 40, 4), UnsampledDriver);
}

TEST_CASE("closed forms") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 0), 1, 4);
  auto zw = zero_driver(g, 1, W);
  SdeSpec one(p, 1, 1, W);
  one.drift(0) = cst(p, 2, 1);
  auto s1 = solve_sde(one, g, {I(p, 5)}, zw);
  for (std::size_t t = 0; t < g.size(); ++t) REQUIRE(s1.states[t][0] == I(p, 5) + (g.time(t) - g.t0));

  auto ws = sampler(p);
  auto w = wiener_driver(g, ws, 7, 1);
  SdeSpec noise(p, 1, 1, W);
  noise.diffusion(0, 0) = cst(p, 2, 3);
  auto s2 = solve_sde(noise, g, {I(p, 1)}, w, 200, false);
  for (std::size_t t = 0; t < g.size(); ++t) REQUIRE(s2.states[t][0] == I(p, 1) + I(p, 3) * (w.at(t)[0] - w.at(0)[0]));

  // a = lambda x: the partition sum solves to a product along the digit path
  for (long long lambda : {2, -4, 9}) {
    SdeSpec lin(p, 1, 1, W);
    lin.drift(0) = var(p, 2, 1).scaled(I(p, lambda));
    auto s3 = solve_sde(lin, g, {I(p, 1)}, zw);
    for (std::size_t t = 0; t < g.size(); ++t) {
      PAdicNumber prod = I(p, 1);
      for (int n = 0; n < g.digits(t); ++n)
        prod = prod * (I(p, 1) + I(p, lambda) * (g.time(g.sigma(t, n + 1)) - g.time(g.sigma(t, n))));
      REQUIRE((s3.states[t][0] - prod).norm() <= tol(p));
    }
    CHECK(s3.observed_ratio <= s3.certificate);
    CHECK(s3.residual <= tol(p));
  }
}

TEST_CASE("Picard contraction") {
  const unsigned p = 2;
  TimeGrid g(p, I(p, 0), 2, 6);
  auto zw = zero_driver(g, 2, W);
  SdeSpec s(p, 2, 2, W);
  // a = (x1 + t x0, x0^2), E = 0
  s.drift(0) = var(p, 3, 2) + var(p, 3, 0) * var(p, 3, 1);
  s.drift(1) = var(p, 3, 1) * var(p, 3, 1);
  auto sol = solve_sde(s, g, {I(p, 1), I(p, 3)}, zw);
  CHECK(sol.corrections.size() >= 5);
  CHECK(sol.certificate < 1.0);
  CHECK(sol.observed_ratio <= sol.certificate);
  CHECK(sol.residual <= tol(p));
  // the same spec on a longer time ball is not certified
  TimeGrid wide(p, I(p, 0), 0, 3);
  SdeSpec steep(p, 1, 1, W);
  steep.drift(0) = var(p, 2, 1).scaled(PAdicNumber::power_of_p(p, -2, W));
  CHECK_THROWS_AS(solve_sde(steep, wide, {I(p, 1)}, zero_driver(wide, 1, W)), NoContraction);
}

TEST_CASE("determinism and refinement") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 0), 1, 4);
  auto ws = sampler(p);
  SdeSpec full(p, 1, 1, W);
  full.drift(0) = var(p, 2, 1).scaled(I(p, 3));
  full.diffusion(0, 0) = cst(p, 2, 9) + var(p, 2, 1).scaled(I(p, 9));
  auto w1 = wiener_driver(g, ws, 13, 4), w2 = wiener_driver(g, ws, 13, 4);
  auto a = solve_sde(full, g, {I(p, 1)}, w1, 200, false), b = solve_sde(full, g, {I(p, 1)}, w2, 200, false);
  for (std::size_t t = 0; t < g.size(); ++t) REQUIRE(a.states[t] == b.states[t]);
  for (int level = 0; level < 4; ++level) {
    auto rd = refinement_delta(full, g, a, w1, level);
    CHECK(rd.delta <= rd.bound);
  }
}

TEST_CASE("Ito transform") {
  const unsigned p = 5;
  SdeSpec s(p, 2, 1, W);
  s.drift(0) = cst(p, 3, 2) + var(p, 3, 1);
  s.drift(1) = var(p, 3, 2) * var(p, 3, 0);
  s.diffusion(0, 0) = cst(p, 3, 1);
  s.diffusion(1, 0) = var(p, 3, 1);
  State x{I(p, 3), I(p, 7)};
  auto t = I(p, 10);
  auto J = ito_transform_J(identity_map(p, 2, W), s, t, x);
  CHECK(J.Ja == s.drift_at(t, x));
  CHECK(J.JE == s.diffusion_at(t, x));

  // phi(x) = A x + b
  PolyMap aff{var(p, 2, 0).scaled(I(p, 2)) + var(p, 2, 1) + cst(p, 2, 4), var(p, 2, 1).scaled(I(p, -3))};
  auto Ja = ito_transform_J(aff, s, t, x);
  auto a = s.drift_at(t, x);
  auto E = s.diffusion_at(t, x);
  CHECK(Ja.Ja[0] == I(p, 2) * a[0] + a[1]);
  CHECK(Ja.Ja[1] == I(p, -3) * a[1]);
  CHECK(Ja.JE[0][0] == I(p, 2) * E[0][0] + E[1][0]);
  CHECK(Ja.JE[1][0] == I(p, -3) * E[1][0]);

  Engine rng = make_stream(72, 0);
  for (int i = 0; i < 50; ++i) {
    auto phi = random_quadratic(rng, p, 2), psi = random_quadratic(rng, p, 2);
    State y{I(p, gen::uniform_int(rng, -50, 50)), I(p, gen::uniform_int(rng, -50, 50))};
    REQUIRE(cocycle_gap(phi, psi, y) <= tol(p));
  }
  for (int i = 0; i < 20; ++i) {
    auto f = random_quadratic(rng, p, 2), g = random_quadratic(rng, p, 2), h = random_quadratic(rng, p, 2);
    State y{I(p, gen::uniform_int(rng, -50, 50)), I(p, gen::uniform_int(rng, -50, 50))};
    auto hy = eval(h, y), ghy = eval(g, hy);
    auto Jf = jacobian(f, ghy), Jg = jacobian(g, hy), Jh = jacobian(h, y);
    auto left = matmul(Jf, matmul(Jg, Jh)), right = matmul(matmul(Jf, Jg), Jh);
    REQUIRE(max_abs_diff(left, right) == 0.0);
    REQUIRE(max_abs_diff(left, jacobian(compose(f, compose(g, h)), y)) <= tol(p));
  }

  // the Taylor series of phi(x + s h) agrees with the closed form at first order
  auto phi = random_quadratic(rng, p, 2);
  auto js = j_series_check(phi, x, {I(p, 5), I(p, 10)});
  CHECK(js.first_order_gap <= tol(p));
  CHECK(js.sum_gap <= tol(p));
}

TEST_CASE("Ito transform along paths") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 0), 1, 4);
  auto ws = sampler(p);
  SdeSpec full(p, 1, 1, W);
  full.drift(0) = var(p, 2, 1).scaled(I(p, 3));
  full.diffusion(0, 0) = cst(p, 2, 9) + var(p, 2, 1).scaled(I(p, 9));
  PolyMap phi{var(p, 1, 0) * var(p, 1, 0) + var(p, 1, 0).scaled(I(p, 2))};
  for (std::uint64_t path = 0; path < 10; ++path) {
    auto w = wiener_driver(g, ws, 17, path);
    auto sol = solve_sde(full, g, {I(p, 1)}, w, 200, false);
    auto jc = ito_path_check(phi, full, g, sol, w);
    REQUIRE(jc.within);
  }
}

TEST_CASE("evolution family") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 0), 1, 3);
  auto ws = sampler(p);
  ChristoffelField flat(p, 1, W);
  auto atlas = affine_atlas(flat, Ball(I(p, 0), 0), {{I(p, 3)}}, {I(p, 0)});
  auto driver = [&](std::uint64_t i) { return wiener_driver(g, ws, 19, i); };

  SdeSpec still(p, 1, 1, W);
  EvolutionFamily id(still, atlas, g);
  auto w = driver(0);
  for (std::size_t t = 0; t < g.size(); ++t) CHECK(id.single_chart(w, t, 0, {I(p, 4)}) == State{I(p, 4)});

  SdeSpec full(p, 1, 1, W);
  full.drift(0) = var(p, 2, 1).scaled(I(p, 3));
  full.diffusion(0, 0) = cst(p, 2, 9) + var(p, 2, 1).scaled(I(p, 9));
  EvolutionFamily fam(full, atlas, g);
  auto rep = evolution_check(fam, full, {I(p, 1)}, driver, 40);
  CHECK(rep.paths == 40);
  CHECK(rep.evolution_gap <= tol(p));
  CHECK(rep.glue_gap <= tol(p));
  CHECK(rep.flow_gap >= 0.0);
  CHECK(rep.flow_gap <= tol(p));
  CHECK(rep.escape_fraction == doctest::Approx(double(rep.escaped) / rep.paths));

  // the chart transition is undone exactly
  auto cs = fam.from_chart0({I(p, 4)});
  CHECK(cs.chart == 0);
  CHECK(fam.to_chart0({1, {I(p, 12)}}) == State{I(p, 4)});
}

TEST_CASE("moment bound") {
  const unsigned p = 3;
  TimeGrid g(p, I(p, 0), 1, 3);
  auto ws = sampler(p);
  auto driver = [&](std::uint64_t i) { return wiener_driver(g, ws, 23, i); };
  SdeSpec still(p, 1, 1, W);
  auto r0 = moment_bound_check(still, g, {I(p, 9)}, 2, driver, 50);
  CHECK(r0.q == doctest::Approx(1.0 / 81));
  CHECK(r0.holds);

  SdeSpec one(p, 1, 1, W);
  one.drift(0) = cst(p, 2, 1);
  one.C1 = 1.0;
  auto r1 = moment_bound_check(one, g, {I(p, 0)}, 1, driver, 50);
  CHECK(r1.q == doctest::Approx(1.0 / 3));
  CHECK(r1.holds);

  SdeSpec full(p, 1, 1, W);
  full.drift(0) = var(p, 2, 1).scaled(I(p, 3));
  full.diffusion(0, 0) = cst(p, 2, 9) + var(p, 2, 1).scaled(I(p, 9));
  full.C1 = 1.0;
  full.C2 = 1.0;
  auto r2 = moment_bound_check(full, g, {I(p, 1)}, 1, driver, 2000);
  CHECK(r2.holds);
  CHECK(r2.level_increment.size() == 3);
  CHECK(r2.increments_shrink);
}
