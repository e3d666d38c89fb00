#include "doctest.h"
#include "support/gen.hpp"
#include "support/oracles.hpp"

#include "padic/qgaussian.hpp"

#include <cmath>

using namespace padic;

namespace {

PAdicNumber P(unsigned p, long long v, int shift = 0) { return PAdicNumber::from_int(p, v).mul_p_power(shift); }

QGaussianSpec spec1(unsigned p, double q, double b, int M, int N) {
  QGaussianSpec s;
  s.p = p;
  s.q = q;
  s.B = Eigen::MatrixXd::Constant(1, 1, b);
  s.M = M;
  s.N = N;
  return s;
}

// 20 Fourier-grid indices j with xi = j p^-N and the matching Q_p points
std::vector<std::vector<std::uint64_t>> test_frequencies(Engine& rng, unsigned p, int d, int M, int N) {
  std::vector<std::vector<std::uint64_t>> out;
  const auto side = static_cast<int>(upow(p, M + N));
  for (int i = 0; i < 20; ++i) {
    std::vector<std::uint64_t> j(d);
    for (auto& c : j) c = static_cast<std::uint64_t>(gen::uniform_int(rng, 0, side - 1));
    out.push_back(j);
  }
  return out;
}

std::vector<PAdicNumber> freq_point(unsigned p, int N, const std::vector<std::uint64_t>& j) {
  std::vector<PAdicNumber> z;
  for (auto c : j) z.push_back(P(p, static_cast<long long>(c), -N));
  return z;
}

}  // namespace

TEST_CASE("v_q examples") {
  auto v = v_q({P(3, 3), P(3, 1), P(3, 0)}, 2.0);
  CHECK(v[0] == doctest::Approx(1.0 / 3));
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);
  CHECK(v_q({P(5, 1, -1)}, 4.0)[0] == doctest::Approx(25.0));
}

TEST_CASE("characteristic functional") {
  QGaussianSpec s = spec1(3, 1.5, 0.7, 2, 2);
  s.gamma = {P(3, 5, -1)};
  CHECK(std::abs(char_functional(s, {P(3, 0)}) - 1.0) < 1e-15);
  CHECK(std::abs(char_functional(spec1(3, 2, 0.7, 2, 2), {P(3, 2)}) - std::exp(-0.7)) < 1e-15);
  QGaussianSpec flat = s;
  flat.B.setZero();
  Engine rng = make_stream(41, 0);
  for (int i = 0; i < 200; ++i) {
    auto z = gen::padic(rng, 3, -3, 3, 20);
    cplx c = char_functional(s, {z});
    REQUIRE(std::abs(c) <= 1.0 + 1e-15);
    REQUIRE(std::abs(char_functional(flat, {z}) - char_chi(z * s.gamma[0])) < 1e-14);
    // the shift only changes the phase
    REQUIRE(std::abs(std::abs(c) - std::abs(char_functional(spec1(3, 1.5, 0.7, 2, 2), {z}))) < 1e-14);
  }
  // product rule
  QGaussianSpec a = spec1(2, 1.0, 0.3, 2, 2), b = spec1(2, 1.0, 1.1, 2, 2), ab = spec1(2, 1.0, 1.4, 2, 2);
  a.gamma = {P(2, 3, -2)};
  b.gamma = {P(2, 7, 1)};
  ab.gamma = {a.gamma[0] + b.gamma[0]};
  for (int i = 0; i < 100; ++i) {
    auto z = gen::padic(rng, 2, -4, 4, 20);
    REQUIRE(std::abs(char_functional(a, {z}) * char_functional(b, {z}) - char_functional(ab, {z})) < 1e-14);
  }
}

TEST_CASE("density") {
  auto s = spec1(2, 1.0, 1.0, 4, 4);
  auto rho = density(s);
  CHECK(std::abs(haar_integral(rho) - 1.0) < 1e-6);
  // direct quadrature; the grid folds the mass outside B(0, p^M) back in
  const double tail = 1.0 - oracle::qgauss_ball_mass(2, 1.0, 1.0, 4);
  double worst = 0.0, min_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    worst = std::max(worst, std::abs(rho[i].real() - oracle::qgauss_coset_density(2, 1.0, 1.0, 4, rho.axis_norm(i))));
    min_re = std::min(min_re, rho[i].real());
    max_im = std::max(max_im, std::abs(rho[i].imag()));
  }
  CHECK(worst <= 2 * tail / 16 + 1e-9);
  CHECK(min_re > -1e-8);
  CHECK(max_im < 1e-10);

  // Fourier round trip
  QGaussianSpec s2;
  s2.p = 3;
  s2.q = 2.0;
  s2.B = Eigen::Matrix2d{{1.0, 0.3}, {0.3, 0.5}};
  s2.M = 2;
  s2.N = 2;
  CHECK(max_abs_diff(fourier(density(s2)), char_grid(s2)) < 1e-9);

  // shift = translation
  auto shifted = s;
  shifted.gamma = {P(2, 5, -2)};
  CHECK(max_abs_diff(density(shifted), translate(rho, shifted.gamma)) < 1e-12);

  QGaussianSpec degenerate = s2;
  degenerate.B = Eigen::Matrix2d{{1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(density(degenerate), DegenerateCovariance);
  QGaussianSpec indefinite = s2;
  indefinite.B = Eigen::Matrix2d{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS(validate(indefinite), std::invalid_argument);
  QGaussianSpec asym = s2;
  asym.B(0, 1) = 0.1;
  CHECK_THROWS_AS(validate(asym), std::invalid_argument);
}

TEST_CASE("convolution semigroup") {
  QGaussianSpec a, b, ab;
  for (auto* s : {&a, &b, &ab}) {
    s->p = 3;
    s->q = 1.3;
    s->M = 2;
    s->N = 2;
  }
  a.B = Eigen::Matrix2d{{1.0, 0.2}, {0.2, 0.4}};
  b.B = Eigen::Matrix2d{{0.5, -0.1}, {-0.1, 0.9}};
  ab.B = a.B + b.B;
  CHECK(max_abs_diff(convolve(density(a), density(b)), density(ab)) < 1e-8);
}

TEST_CASE("sampling") {
  Engine rng = make_stream(42, 0);
  auto point = spec1(3, 2.0, 0.0, 2, 2);
  point.gamma = {P(3, 7, -1)};
  auto xs = sample(point, 50, rng);
  auto lat = Lattice::for_levels(3, 1, 2, 2);
  for (const auto& x : xs) CHECK((lat.to_padic(x[0]) - point.gamma[0]).norm() <= 1.0 / 9);

  auto s = spec1(2, 1.0, 0.8, 4, 4);
  const std::size_t n = 20000;
  xs = sample(s, n, rng);
  lat = Lattice::for_levels(2, 1, 4, 4);
  for (const auto& j : test_frequencies(rng, 2, 1, 4, 4)) {
    cplx emp = empirical_char(lat, xs, j, 4);
    REQUIRE(std::abs(emp - char_functional(s, freq_point(2, 4, j))) <= 4 / std::sqrt(double(n)));
  }

  // sums of independent draws follow the convolved law
  auto s1 = spec1(2, 1.0, 0.3, 4, 4), s2 = spec1(2, 1.0, 0.5, 4, 4), s12 = spec1(2, 1.0, 0.8, 4, 4);
  auto x1 = sample(s1, n, rng), x2 = sample(s2, n, rng);
  std::vector<LatticePoint> sum(n);
  for (std::size_t i = 0; i < n; ++i) sum[i] = {lat.add(x1[i][0], x2[i][0])};
  for (const auto& j : test_frequencies(rng, 2, 1, 4, 4)) {
    cplx emp = empirical_char(lat, sum, j, 4);
    REQUIRE(std::abs(emp - char_functional(s12, freq_point(2, 4, j))) <= 4 / std::sqrt(double(n)));
  }
}

TEST_CASE("Wick pairings") {
  Eigen::MatrixXd B1 = Eigen::MatrixXd::Constant(1, 1, 1.7);
  CHECK(moment_wick(B1, {0, 0}) == doctest::Approx(1.7));
  CHECK(moment_wick(B1, {0, 0, 0, 0}) == doctest::Approx(3 * 1.7 * 1.7));
  CHECK(moment_wick(B1, {0, 0, 0}) == 0.0);
  Engine rng = make_stream(43, 0);
  for (int t = 0; t < 20; ++t) {
    int d = gen::uniform_int(rng, 1, 3);
    Eigen::MatrixXd G = Eigen::MatrixXd::Random(d, d);
    Eigen::MatrixXd B = G * G.transpose();
    std::vector<std::vector<double>> Bv(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) Bv[i][k] = B(i, k);
    std::vector<int> idx(2 * gen::uniform_int(rng, 1, 3));
    for (auto& j : idx) j = gen::uniform_int(rng, 0, d - 1);
    REQUIRE(moment_wick(B, idx) == doctest::Approx(oracle::wick_permutations(Bv, idx)).epsilon(1e-12));
  }
}

TEST_CASE("truncated moments") {
  auto zero = spec1(2, 2.0, 0.0, 3, 3);
  CHECK(moment_numeric(zero, {0, 0}, 2).value == 0.0);
  // ball-mass oracle: shells p^j, -N < j <= L, weight p^(j q)
  for (unsigned p : {2u, 3u}) {
    const int M = 4, N = 3, L = 2;
    const double q = 2.0, b = 1.0;
    auto s = spec1(p, q, b, M, N);
    double expect = 0.0;
    for (int j = 1 - N; j <= L; ++j)
      expect += std::pow(double(p), j * q) *
                (oracle::qgauss_ball_mass(p, q, b, j) - oracle::qgauss_ball_mass(p, q, b, j - 1));
    auto got = moment_numeric(s, {0, 0}, L);
    CHECK(got.L == L);
    const double tail = 1.0 - oracle::qgauss_ball_mass(p, q, b, M);
    CHECK(std::abs(got.value - expect) <= 2 * tail * std::pow(double(p), L * q) + 1e-9);
  }
  // s < q: the moment settles as the radius grows
  auto s = spec1(3, 2.0, 1.0, 7, 2);
  CHECK(std::abs(absolute_moment(s, 0, 0.5, 6).value - absolute_moment(s, 0, 0.5, 5).value) < 1e-3);
  QGaussianSpec s2;
  s2.p = 2;
  s2.q = 1.0;
  s2.B = Eigen::Matrix2d{{1.0, 0.0}, {0.0, 0.5}};
  s2.M = 2;
  s2.N = 2;
  CHECK(trace_sum(s2, 1) == doctest::Approx(moment_numeric(s2, {0, 0}, 1).value + moment_numeric(s2, {1, 1}, 1).value));
}

TEST_CASE("q-Wiener paths") {
  WienerSampler still(spec1(2, 1.0, 0.0, 3, 3));
  auto flat = still.path({0.0, 0.5, 1.0}, 1, 0);
  for (const auto& x : flat.states) CHECK(x[0] == 0u);

  auto spec = spec1(2, 1.0, 1.0, 4, 4);
  WienerSampler ws(spec);
  CHECK_THROWS(ws.path({0.0, 1.0, 1.0}, 1, 0));
  const std::size_t n = 20000;
  std::vector<LatticePoint> two, three;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = ws.path({0.0, 0.7}, 5, i);
    CHECK(a.states[0][0] == 0u);
    two.push_back(a.states[1]);
    three.push_back(ws.path({0.0, 0.3, 0.7}, 6, i).states[2]);
  }
  Engine rng = make_stream(44, 0);
  for (const auto& j : test_frequencies(rng, 2, 1, 4, 4)) {
    cplx target = char_functional(spec.scaled(0.7), freq_point(2, 4, j));
    REQUIRE(std::abs(empirical_char(ws.lattice(), two, j, 4) - target) <= 4 / std::sqrt(double(n)));
    REQUIRE(std::abs(empirical_char(ws.lattice(), three, j, 4) - target) <= 4 / std::sqrt(double(n)));
  }
}

TEST_CASE("Ito analog bookkeeping") {
  auto spec = spec1(2, 1.0, 1.0, 4, 4);
  auto zero = ito_check(spec, 0.0, 1.0, {4}, {[](double) { return 0.0; }}, {0.0}, 100, 3);
  CHECK(zero.at(4, 0).mean == 0.0);
  // with increments i.i.d., the two integrands differ exactly by their Riemann sums
  auto rep = ito_check(spec, 0.0, 1.0, {8}, {[](double) { return 1.0; }, [](double t) { return t; }}, {1.0, 0.5},
                       4000, 3);
  double riemann = 7.0 / 16;  // sum of left endpoints j/8 times 1/8
  auto one = rep.at(8, 0), lin = rep.at(8, 1);
  CHECK(std::abs(lin.mean - one.mean * riemann) <= 4 * (lin.se + one.se * riemann));
  CHECK_THROWS(ito_check(spec, 0.0, 1.0, {3, 8}, {[](double) { return 1.0; }}, {1.0}, 10, 3));
}

TEST_CASE("Chebyshev frequency against the exact tail") {
  for (unsigned p : {2u, 3u}) {
    auto s = spec1(p, 2.0, 1.0, 4, 3);
    Eigen::MatrixXd A = Eigen::MatrixXd::Constant(1, 1, 0.25);
    auto r = chebyshev_check(s, A, 20000, 9);
    // A |x|^2 >= 1 iff |x| >= 2 iff |x| > 1 for p = 2, 3
    double exact = 1.0 - oracle::qgauss_ball_mass(p, 2.0, 1.0, 0);
    CHECK(std::abs(r.frequency - exact) <= 5 * r.se + 2 * (1.0 - oracle::qgauss_ball_mass(p, 2.0, 1.0, 4)));
    CHECK(r.bound == doctest::Approx(0.25));
  }
}
