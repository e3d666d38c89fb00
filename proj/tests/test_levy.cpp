#include "doctest.h"
#include "support/gen.hpp"

#include "padic/levy_poisson.hpp"

#include <cmath>

using namespace padic;

namespace {

PAdicNumber P(unsigned p, long long v, int shift = 0) { return PAdicNumber::from_int(p, v).mul_p_power(shift); }

// the cells j + 3 Z_3 (j = 0, 1, 2) paving Z_3
std::vector<Cell> thirds(double m0, double m1, double m2) {
  return {{Ball(P(3, 0), -1), m0}, {Ball(P(3, 1), -1), m1}, {Ball(P(3, 2), -1), m2}};
}

double poisson_pmf(double m, int n) { return std::exp(-m + n * std::log(m) - std::lgamma(n + 1.0)); }

}  // namespace

TEST_CASE("pavings") {
  CHECK_NOTHROW(check_paving(3, thirds(1, 1, 1)));
  CHECK_THROWS_AS(check_paving(3, {{Ball(P(3, 0), 0), 1.0}, {Ball(P(3, 1), -1), 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(check_paving(3, thirds(1, -0.5, 1)), std::invalid_argument);
  CHECK_THROWS_AS(check_paving(2, thirds(1, 1, 1)), std::invalid_argument);
  IntensitySpec spec(3, thirds(0.5, 1.0, 2.0));
  CHECK(spec.total_mass() == doctest::Approx(3.5));
  CHECK(spec.mass_of({0, 2}) == doctest::Approx(2.5));
}

TEST_CASE("configurations") {
  Engine rng = make_stream(51, 0);
  IntensitySpec empty(3, thirds(0, 0, 0));
  for (int i = 0; i < 50; ++i) CHECK(sample_poisson_config(empty, rng).size() == 0);

  IntensitySpec spec(3, thirds(0.5, 1.0, 2.0));
  for (int i = 0; i < 200; ++i) {
    auto c = sample_poisson_config(spec, rng);
    REQUIRE(c.points.size() == c.size());
    int total = 0;
    for (int k : c.counts) total += k;
    REQUIRE(total == static_cast<int>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) REQUIRE(spec.cells()[c.cell_of[j]].ball.contains(c.points[j]));
  }

  // one cell of mass 1: P(empty) = 1/e
  IntensitySpec one(3, {{Ball(P(3, 0), 0), 1.0}});
  auto rows = count_law_check(one, {{0}}, {{0}, {1}, {2}}, 20000, 7);
  for (const auto& r : rows) CHECK(std::abs(r.z) <= 4);
  CHECK(rows[0].expected == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("count law") {
  IntensitySpec spec(3, thirds(0.5, 1.0, 2.0));
  // union of all cells behaves as Poisson(total); disjoint unions add masses
  auto rows = count_law_check(spec, {{0, 1, 2}}, {{2}, {3}, {4}}, 20000, 8);
  for (const auto& r : rows) {
    CHECK(std::abs(r.z) <= 4);
    CHECK(r.expected == doctest::Approx(poisson_pmf(3.5, r.targets[0])));
  }
  rows = count_law_check(spec, {{0, 2}, {1}}, {{1, 1}, {2, 0}, {3, 1}}, 20000, 9);
  for (const auto& r : rows) {
    CHECK(std::abs(r.z) <= 4);
    CHECK(r.expected == doctest::Approx(poisson_pmf(2.5, r.targets[0]) * poisson_pmf(1.0, r.targets[1])));
  }
  // independence across two cells
  auto chi = count_chi_square(spec, {{0}, {1}}, 20000, 10);
  CHECK(chi.p_value > 0.01);

  // refining cell 2 into 2 + 9 Z_3, 5 + 9 Z_3, 8 + 9 Z_3 leaves the law of the union unchanged
  auto fine = thirds(0.5, 1.0, 0.0);
  fine.pop_back();
  for (int j : {2, 5, 8}) fine.push_back({Ball(P(3, j), -2), 2.0 / 3});
  IntensitySpec refined(3, fine);
  auto chi2 = count_chi_square(refined, {{0}, {1}, {2, 3, 4}}, 20000, 11);
  CHECK(chi2.p_value > 0.01);
}

TEST_CASE("superposition and thinning") {
  Engine rng = make_stream(52, 0);
  IntensitySpec a(3, thirds(0.5, 0.2, 1.0)), b(3, thirds(0.1, 1.3, 0.4));
  std::vector<std::vector<int>> merged, thinned;
  for (int i = 0; i < 20000; ++i) {
    auto c = superpose(sample_poisson_config(a, rng), sample_poisson_config(b, rng));
    merged.push_back(c.counts);
    thinned.push_back(thin(sample_poisson_config(a, rng), 0.4, rng).counts);
  }
  CHECK(count_chi_square(merged, {0.6, 1.5, 1.4}).p_value > 0.01);
  CHECK(count_chi_square(thinned, {0.2, 0.08, 0.4}).p_value > 0.01);
}

TEST_CASE("uniform points in a ball") {
  Engine rng = make_stream(53, 0);
  Ball b(P(5, 7, -1), 0);  // 7/5 + Z_5
  std::vector<std::vector<int>> subballs;
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 10000; ++i) {
    auto x = uniform_in_ball(b, rng);
    REQUIRE(b.contains(x));
    for (int j = 0; j < 5; ++j)
      if (Ball(P(5, 7, -1) + P(5, j), -1).contains(x)) ++hist[j];
  }
  double stat = 0.0;
  for (int h : hist) stat += (h - 2000.0) * (h - 2000.0) / 2000.0;
  CHECK(stat < 18.47);  // chi-square, 4 dof, 0.999 quantile
}

TEST_CASE("Levy exponent") {
  LevySpec s;
  s.p = 3;
  s.m0 = 0.7;
  CHECK(levy_exponent(s, 1.3) == doctest::Approx(1.3 * 0.7));
  s.cells = {{Ball(P(3, 1, -1), -1), 2.0}};  // |l| = 3, pi_2(l) = 3
  CHECK(levy_exponent(s, 0.0) == 0.0);
  for (double rho : {0.5, 1.0, 2.0}) CHECK(levy_exponent(s, rho) == doctest::Approx(rho * 0.7 + 2.0 * (1 - std::exp(-3 * rho))));
  s.cells.push_back({Ball(P(3, 1), -1), 0.5});  // |l| = 1
  const double h = 1e-6;
  double slope = (levy_exponent(s, h) - levy_exponent(s, -h)) / (2 * h);
  CHECK(std::abs(slope - (0.7 + 3.0 * 2.0 + 1.0 * 0.5)) < 1e-6);
  // unit rescaling of the cell representatives
  LevySpec u = s;
  for (auto& c : u.cells) c.ball = Ball(c.ball.center()[0] * P(3, 2), c.ball.radius_exponent());
  for (double rho : {0.5, 1.0, 2.0}) CHECK(levy_exponent(u, rho) == doctest::Approx(levy_exponent(s, rho)).epsilon(1e-15));
  LevySpec bad = s;
  bad.cells.push_back({Ball(P(3, 0), -2), 1.0});
  CHECK_THROWS(levy_exponent(bad, 1.0));
}

TEST_CASE("compound Poisson paths") {
  Engine rng = make_stream(54, 0);
  std::vector<Cell> cells{{Ball(P(2, 1, -2), -3), 1.0}};  // |l| = 4
  std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  auto still = compound_poisson_path(1e-14, 0.3, cells, {1.0}, 2.0, UnitCharacter::trivial(), grid, rng);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(still.trace[i] == doctest::Approx(0.3 * grid[i]));

  std::vector<std::vector<int>> counts;
  for (int i = 0; i < 20000; ++i) {
    auto path = compound_poisson_path(1.5, 0.0, cells, {1.0}, 2.0, UnitCharacter::trivial(), grid, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) REQUIRE(path.trace[k] == doctest::Approx(4.0 * path.jumps[k]));
    REQUIRE(path.jumps[0] == 0);
    counts.push_back({path.jumps[2] - path.jumps[0], path.jumps[4] - path.jumps[2]});
  }
  // Poisson(rate t) counts, independent over disjoint windows
  CHECK(count_chi_square(counts, {1.5, 1.5}, 4).p_value > 0.01);
}

TEST_CASE("Laplace identity") {
  LevySpec s;
  s.p = 2;
  s.m0 = 0.4;
  auto zero = levy_laplace_check(s, 1.0, {0.0, 1.0}, 100, 3);
  CHECK(zero[0].empirical == 1.0);
  CHECK(zero[1].empirical == doctest::Approx(std::exp(-0.4)));
  s.cells = {{Ball(P(2, 1, -1), -2), 1.2}};  // |l| = 2
  auto rows = levy_laplace_check(s, 1.0, {0.0, 0.5, 1.0, 2.0}, 20000, 4);
  for (const auto& r : rows) {
    CHECK(r.exact == doctest::Approx(std::exp(-(r.rho * 0.4 + 1.2 * (1 - std::exp(-2 * r.rho))))));
    CHECK(std::abs(r.z) <= 4);
  }
}

TEST_CASE("inhomogeneous paths") {
  InhomogeneousSpec s;
  s.p = 2;
  s.c_times = {0.0, 1.0, 2.0};
  s.c_values = {0.0, 0.5, 0.2};
  s.block_edges = {0.0, 1.0, 2.0};
  s.block_mass = {{0.0}, {0.0}};
  s.cells = {{Ball(P(2, 1, -1), -2), 0.0}};
  Engine rng = make_stream(55, 0);
  auto flat = inhomogeneous_levy_path(s, {0.0, 0.5, 1.0, 1.5, 2.0}, rng);
  CHECK(flat.trace[1] == doctest::Approx(0.25));
  CHECK(flat.trace[3] == doctest::Approx(0.35));
  CHECK(flat.jumps.back() == 0);

  s.block_mass = {{0.4}, {1.6}};
  double mean0 = 0.0, mean1 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto path = inhomogeneous_levy_path(s, {0.0, 1.0, 2.0}, rng, false);
    mean0 += path.jumps[1];
    mean1 += path.jumps[2] - path.jumps[1];
  }
  CHECK(std::abs(mean0 / n - 0.4) <= 4 * std::sqrt(0.4 / n));
  CHECK(std::abs(mean1 / n - 1.6) <= 4 * std::sqrt(1.6 / n));

  // two-time identity over [0.5, 1.5]: half of each block, pi(l) = 2
  auto rows = inhomogeneous_laplace_check(s, 0.5, 1.5, {0.5, 1.0, 2.0}, 20000, 12);
  for (const auto& r : rows) {
    double drift = 0.35 - 0.25;
    CHECK(r.exact == doctest::Approx(std::exp(-(r.rho * drift + (0.2 + 0.8) * (1 - std::exp(-2 * r.rho))))));
    CHECK(std::abs(r.z) <= 4);
  }

  // homogeneous blocks reproduce the compound Poisson exponent
  InhomogeneousSpec h = s;
  h.c_values = {0.0, 0.3, 0.6};
  h.block_mass = {{1.2}, {1.2}};
  LevySpec l;
  l.p = 2;
  l.m0 = 0.3;
  l.cells = {{Ball(P(2, 1, -1), -2), 1.2}};
  auto hr = inhomogeneous_laplace_check(h, 0.0, 1.0, {1.0}, 10, 1);
  CHECK(hr[0].exact == doctest::Approx(std::exp(-levy_exponent(l, 1.0))));
}
