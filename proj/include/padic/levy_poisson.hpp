#pragma once

#include "padic/padic_number.hpp"
#include "padic/rng.hpp"

#include <complex>
#include <vector>

namespace padic {

// A ball of Q_p with a nonnegative mass.
struct Cell {
  Ball ball;
  double mass = 0.0;
};

class IntensitySpec {
 public:
  IntensitySpec(unsigned p, std::vector<Cell> cells);
  unsigned prime() const { return p_; }
  const std::vector<Cell>& cells() const { return cells_; }
  double total_mass() const;
  // mass of a union of cells given by index
  double mass_of(const std::vector<int>& group) const;

 private:
  unsigned p_;
  std::vector<Cell> cells_;
};

// throws std::invalid_argument unless the balls are pairwise disjoint and live in Q_p
void check_paving(unsigned p, const std::vector<Cell>& cells);

struct PointConfiguration {
  std::vector<PAdicNumber> points;  // empty when points were not placed
  std::vector<int> cell_of;         // cell index of each point
  std::vector<int> counts;          // per cell
  std::size_t size() const { return cell_of.size(); }
};

// Haar-uniform point of the ball, digits drawn to the given precision.
PAdicNumber uniform_in_ball(const Ball& b, Engine& rng, int precision = default_precision());

PointConfiguration sample_poisson_config(const IntensitySpec& spec, Engine& rng, bool place_points = true);
PointConfiguration superpose(const PointConfiguration& a, const PointConfiguration& b);
PointConfiguration thin(const PointConfiguration& c, double keep, Engine& rng);

struct CountLawRow {
  std::vector<int> targets;  // n_i per group
  double empirical = 0.0;
  double se = 0.0;
  double expected = 0.0;  // prod m(B_i)^n_i e^-m(B_i) / n_i!
  double z = 0.0;         // (empirical - expected) / sqrt(expected (1 - expected) / samples)
};
// frequencies of {card(gamma cap B_i) = n_i for all i}, each B_i a union of cells
std::vector<CountLawRow> count_law_check(const IntensitySpec& spec, const std::vector<std::vector<int>>& groups,
                                         const std::vector<std::vector<int>>& targets, std::size_t samples,
                                         std::uint64_t seed);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int bins = 0;
};
// Joint law of the group counts against the product Poisson law. Counts are
// capped at `cap` (the last bin holds the tail); bins expecting fewer than 5
// draws are pooled.
ChiSquare count_chi_square(const IntensitySpec& spec, const std::vector<std::vector<int>>& groups,
                           std::size_t samples, std::uint64_t seed, int cap = 3);
// Same statistic for counts already drawn.
ChiSquare count_chi_square(const std::vector<std::vector<int>>& counts, const std::vector<double>& means, int cap = 3);

// pi_a with a tame unit character, evaluated at a cell center
std::complex<double> cell_character(const Cell& c, std::complex<double> a, const UnitCharacter& pi0);

// Levy data: drift m0, jump intensity n given as cell masses (cells avoid 0), character pi_a.
struct LevySpec {
  unsigned p = 2;
  double m0 = 0.0;
  std::vector<Cell> cells;
  std::complex<double> a{2.0, 0.0};
  UnitCharacter pi0{};
};

// psi(rho) = rho m0 + sum_cells [1 - exp(-rho pi(l_cell))] n(cell)
double levy_exponent(const LevySpec& spec, double rho);

struct LevyPath {
  std::vector<double> times;
  std::vector<PAdicNumber> states;  // sum of jumps; empty when not tracked
  std::vector<int> jumps;           // cumulative jump count
  std::vector<double> trace;        // pi[xi(t)] = drift + sum of pi(l_j)
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Jump times Poisson(rate), magnitudes from the cell law `weights` (normalised
// internally), uniform inside the chosen cell.
LevyPath compound_poisson_path(double rate, double m0, const std::vector<Cell>& cells, const std::vector<double>& weights,
                               std::complex<double> a, const UnitCharacter& pi0, const std::vector<double>& grid,
                               Engine& rng, bool track_state = true);
LevyPath compound_poisson_path(const LevySpec& spec, const std::vector<double>& grid, Engine& rng,
                               bool track_state = true);

struct LaplaceRow {
  double rho = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double exact = 0.0;
  double z = 0.0;
};
// empirical E exp(-rho pi[xi(t)]) against exp(-t psi(rho))
std::vector<LaplaceRow> levy_laplace_check(const LevySpec& spec, double t, const std::vector<double>& rhos,
                                           std::size_t samples, std::uint64_t seed, unsigned workers = 1);

// Time-inhomogeneous version: drift c(t) piecewise linear through (c_times,
// c_values); block_mass[b][c] is the expected number of jumps in
// [block_edges[b], block_edges[b+1]) with magnitude in cell c.
struct InhomogeneousSpec {
  unsigned p = 2;
  std::vector<double> c_times;
  std::vector<double> c_values;
  std::vector<double> block_edges;
  std::vector<std::vector<double>> block_mass;
  std::vector<Cell> cells;
  std::complex<double> a{2.0, 0.0};
  UnitCharacter pi0{};

  double drift(double t) const;
  // n((t1, t2] x cell)
  double mass_between(double t1, double t2, int cell) const;
};

LevyPath inhomogeneous_levy_path(const InhomogeneousSpec& spec, const std::vector<double>& grid, Engine& rng,
                                 bool track_state = true);
// E exp(-rho (pi[xi(t2)] - pi[xi(t1)])) against the two-time formula
std::vector<LaplaceRow> inhomogeneous_laplace_check(const InhomogeneousSpec& spec, double t1, double t2,
                                                    const std::vector<double>& rhos, std::size_t samples,
                                                    std::uint64_t seed, unsigned workers = 1);

}  // namespace padic
