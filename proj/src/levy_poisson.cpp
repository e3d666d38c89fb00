#include "padic/levy_poisson.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace padic {

namespace {

int pick(const std::vector<double>& cdf, Engine& rng) {
  std::uniform_real_distribution<double> u(0.0, cdf.back());
  double x = u(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) throw std::invalid_argument("negative weight");
    acc += w[i];
    c[i] = acc;
  }
  return c;
}

int poisson_draw(double mean, Engine& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<int> d(mean);
  return d(rng);
}

double real_character(const Cell& c, std::complex<double> a, const UnitCharacter& pi0) {
  auto v = cell_character(c, a, pi0);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
    throw std::invalid_argument("the Laplace functional needs a real character");
  return v.real();
}

}  // namespace

void check_paving(unsigned p, const std::vector<Cell>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& b = cells[i].ball;
    if (b.dimension() != 1 || b.center()[0].prime() != p) throw std::invalid_argument("cells must be balls of Q_p");
    if (!(cells[i].mass >= 0.0) || !std::isfinite(cells[i].mass)) throw std::invalid_argument("cell masses must be finite and nonnegative");
    for (std::size_t j = 0; j < i; ++j)
      if (b.intersects(cells[j].ball)) throw std::invalid_argument("paving cells overlap");
  }
}

IntensitySpec::IntensitySpec(unsigned p, std::vector<Cell> cells) : p_(p), cells_(std::move(cells)) {
  check_paving(p_, cells_);
}

double IntensitySpec::total_mass() const {
  double m = 0.0;
  for (const auto& c : cells_) m += c.mass;
  return m;
}

double IntensitySpec::mass_of(const std::vector<int>& group) const {
  double m = 0.0;
  for (int i : group) m += cells_.at(i).mass;
  return m;
}

PAdicNumber uniform_in_ball(const Ball& b, Engine& rng, int precision) {
  const auto& c = b.center()[0];
  const unsigned p = c.prime();
  std::uniform_int_distribution<unsigned> digit(0, p - 1);
  BigInt u = 0;
  for (int i = 0; i < precision; ++i) u = u * p + digit(rng);
  return c + PAdicNumber::from_bigint(p, u, precision).mul_p_power(-b.radius_exponent());
}

PointConfiguration sample_poisson_config(const IntensitySpec& spec, Engine& rng, bool place_points) {
  PointConfiguration cfg;
  cfg.counts.resize(spec.cells().size());
  for (std::size_t i = 0; i < spec.cells().size(); ++i) {
    int n = poisson_draw(spec.cells()[i].mass, rng);
    cfg.counts[i] = n;
    for (int k = 0; k < n; ++k) {
      cfg.cell_of.push_back(static_cast<int>(i));
      if (place_points) cfg.points.push_back(uniform_in_ball(spec.cells()[i].ball, rng));
    }
  }
  return cfg;
}

PointConfiguration superpose(const PointConfiguration& a, const PointConfiguration& b) {
  PointConfiguration r = a;
  r.points.insert(r.points.end(), b.points.begin(), b.points.end());
  r.cell_of.insert(r.cell_of.end(), b.cell_of.begin(), b.cell_of.end());
  r.counts.resize(std::max(a.counts.size(), b.counts.size()), 0);
  for (std::size_t i = 0; i < b.counts.size(); ++i) r.counts[i] += b.counts[i];
  return r;
}

PointConfiguration thin(const PointConfiguration& c, double keep, Engine& rng) {
  std::bernoulli_distribution coin(keep);
  PointConfiguration r;
  r.counts.assign(c.counts.size(), 0);
  for (std::size_t i = 0; i < c.cell_of.size(); ++i) {
    if (!coin(rng)) continue;
    r.cell_of.push_back(c.cell_of[i]);
    if (!c.points.empty()) r.points.push_back(c.points[i]);
    ++r.counts[c.cell_of[i]];
  }
  return r;
}

std::vector<CountLawRow> count_law_check(const IntensitySpec& spec, const std::vector<std::vector<int>>& groups,
                                         const std::vector<std::vector<int>>& targets, std::size_t samples,
                                         std::uint64_t seed) {
  std::vector<double> means;
  for (const auto& g : groups) means.push_back(spec.mass_of(g));
  std::vector<std::size_t> hits(targets.size(), 0);
  Engine rng = make_stream(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    auto cfg = sample_poisson_config(spec, rng, false);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      bool ok = true;
      for (std::size_t g = 0; g < groups.size() && ok; ++g) {
        int n = 0;
        for (int c : groups[g]) n += cfg.counts[c];
        ok = n == targets[t][g];
      }
      if (ok) ++hits[t];
    }
  }
  std::vector<CountLawRow> rows;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    CountLawRow r;
    r.targets = targets[t];
    double e = 1.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      double m = means[g];
      int n = targets[t][g];
      e *= std::exp(-m + n * std::log(std::max(m, 1e-300)) - std::lgamma(n + 1.0));
      if (m == 0.0) e = n == 0 ? e : 0.0;
    }
    r.expected = e;
    r.empirical = static_cast<double>(hits[t]) / static_cast<double>(samples);
    r.se = std::sqrt(std::max(e * (1.0 - e), 1e-300) / static_cast<double>(samples));
    r.z = (r.empirical - r.expected) / r.se;
    rows.push_back(r);
  }
  return rows;
}

ChiSquare count_chi_square(const std::vector<std::vector<int>>& counts, const std::vector<double>& means, int cap) {
  const std::size_t G = means.size();
  std::size_t nbins = 1;
  for (std::size_t g = 0; g < G; ++g) nbins *= static_cast<std::size_t>(cap + 1);
  // per-group bin probabilities, the last bin holding the tail
  std::vector<std::vector<double>> prob(G, std::vector<double>(cap + 1));
  for (std::size_t g = 0; g < G; ++g) {
    double acc = 0.0;
    for (int n = 0; n < cap; ++n) {
      double pm = means[g] > 0.0 ? boost::math::pdf(boost::math::poisson_distribution<>(means[g]), n) : (n == 0 ? 1.0 : 0.0);
      prob[g][n] = pm;
      acc += pm;
    }
    prob[g][cap] = std::max(0.0, 1.0 - acc);
  }
  std::vector<double> observed(nbins, 0.0);
  for (const auto& c : counts) {
    std::size_t bin = 0;
    for (std::size_t g = 0; g < G; ++g) bin = bin * (cap + 1) + static_cast<std::size_t>(std::min(c[g], cap));
    observed[bin] += 1.0;
  }
  const double n = static_cast<double>(counts.size());
  double stat = 0.0, pooled_o = 0.0, pooled_e = 0.0;
  int bins = 0;
  for (std::size_t bin = 0; bin < nbins; ++bin) {
    double e = n;
    std::size_t r = bin;
    for (std::size_t g = G; g-- > 0;) {
      e *= prob[g][r % (cap + 1)];
      r /= (cap + 1);
    }
    if (e < 5.0) {
      pooled_o += observed[bin];
      pooled_e += e;
      continue;
    }
    stat += (observed[bin] - e) * (observed[bin] - e) / e;
    ++bins;
  }
  if (pooled_e > 0.0) {
    stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++bins;
  }
  ChiSquare cs;
  cs.statistic = stat;
  cs.bins = bins;
  cs.dof = std::max(bins - 1, 1);
  cs.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<>(cs.dof), stat));
  return cs;
}

ChiSquare count_chi_square(const IntensitySpec& spec, const std::vector<std::vector<int>>& groups,
                           std::size_t samples, std::uint64_t seed, int cap) {
  std::vector<double> means;
  for (const auto& g : groups) means.push_back(spec.mass_of(g));
  std::vector<std::vector<int>> counts(samples, std::vector<int>(groups.size(), 0));
  Engine rng = make_stream(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    auto cfg = sample_poisson_config(spec, rng, false);
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (int c : groups[g]) counts[s][g] += cfg.counts[c];
  }
  return count_chi_square(counts, means, cap);
}

std::complex<double> cell_character(const Cell& c, std::complex<double> a, const UnitCharacter& pi0) {
  const auto& x = c.ball.center()[0];
  if (c.ball.contains(PAdicNumber(x.prime(), x.precision())))
    throw std::invalid_argument("jump cells must not contain 0");
  return mult_character(a, pi0, x);
}

double levy_exponent(const LevySpec& spec, double rho) {
  check_paving(spec.p, spec.cells);
  double psi = rho * spec.m0;
  for (const auto& c : spec.cells) {
    if (c.mass == 0.0) continue;
    psi += -std::expm1(-rho * real_character(c, spec.a, spec.pi0)) * c.mass;
  }
  return psi;
}

LevyPath compound_poisson_path(double rate, double m0, const std::vector<Cell>& cells, const std::vector<double>& weights,
                               std::complex<double> a, const UnitCharacter& pi0, const std::vector<double>& grid,
                               Engine& rng, bool track_state) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be nonnegative");
  if (cells.size() != weights.size()) throw std::invalid_argument("one weight per cell");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  std::vector<double> piv(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) piv[i] = real_character(cells[i], a, pi0);
  auto cdf = cells.empty() ? std::vector<double>{} : cumulative(weights);
  LevyPath path;
  path.times = grid;
  if (grid.empty()) return path;
  unsigned p = cells.empty() ? 2 : cells[0].ball.center()[0].prime();
  PAdicNumber state(p);
  double jumps_pi = 0.0;
  int count = 0;
  auto record = [&](double t) {
    path.jumps.push_back(count);
    path.trace.push_back(t * m0 + jumps_pi);
    if (track_state) path.states.push_back(state);
  };
  record(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    int n = cells.empty() || cdf.back() == 0.0 ? 0 : poisson_draw(rate * (grid[i] - grid[i - 1]), rng);
    for (int k = 0; k < n; ++k) {
      int c = pick(cdf, rng);
      jumps_pi += piv[c];
      if (track_state) state += uniform_in_ball(cells[c].ball, rng);
    }
    count += n;
    record(grid[i]);
  }
  return path;
}

LevyPath compound_poisson_path(const LevySpec& spec, const std::vector<double>& grid, Engine& rng, bool track_state) {
  check_paving(spec.p, spec.cells);
  double rate = 0.0;
  std::vector<double> w;
  for (const auto& c : spec.cells) {
    rate += c.mass;
    w.push_back(c.mass);
  }
  return compound_poisson_path(rate, spec.m0, spec.cells, w, spec.a, spec.pi0, grid, rng, track_state);
}

std::vector<LaplaceRow> levy_laplace_check(const LevySpec& spec, double t, const std::vector<double>& rhos,
                                           std::size_t samples, std::uint64_t seed, unsigned workers) {
  std::vector<double> value(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Engine rng = make_stream(seed, i);
    value[i] = compound_poisson_path(spec, {0.0, t}, rng, false).trace.back();
  });
  std::vector<LaplaceRow> rows;
  for (double rho : rhos) {
    std::vector<double> e(samples);
    for (std::size_t i = 0; i < samples; ++i) e[i] = std::exp(-rho * value[i]);
    auto ms = mean_se(e);
    LaplaceRow r;
    r.rho = rho;
    r.empirical = ms.mean;
    r.se = ms.se;
    r.exact = std::exp(-t * levy_exponent(spec, rho));
    r.z = ms.se > 0.0 ? (ms.mean - r.exact) / ms.se : (ms.mean == r.exact ? 0.0 : INFINITY);
    rows.push_back(r);
  }
  return rows;
}

double InhomogeneousSpec::drift(double t) const {
  if (c_times.empty()) return 0.0;
  if (t <= c_times.front()) return c_values.front();
  if (t >= c_times.back()) return c_values.back();
  auto it = std::upper_bound(c_times.begin(), c_times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - c_times.begin());
  double w = (t - c_times[i - 1]) / (c_times[i] - c_times[i - 1]);
  return c_values[i - 1] + w * (c_values[i] - c_values[i - 1]);
}

double InhomogeneousSpec::mass_between(double t1, double t2, int cell) const {
  double m = 0.0;
  for (std::size_t b = 0; b + 1 < block_edges.size(); ++b) {
    double lo = std::max(t1, block_edges[b]), hi = std::min(t2, block_edges[b + 1]);
    if (hi <= lo) continue;
    m += block_mass[b][cell] * (hi - lo) / (block_edges[b + 1] - block_edges[b]);
  }
  return m;
}

namespace {

void check_inhomogeneous(const InhomogeneousSpec& s) {
  check_paving(s.p, s.cells);
  if (s.c_times.size() != s.c_values.size()) throw std::invalid_argument("drift samples mismatch");
  for (std::size_t i = 1; i < s.c_times.size(); ++i)
    if (!(s.c_times[i] > s.c_times[i - 1])) throw std::invalid_argument("drift times must increase");
  for (std::size_t i = 1; i < s.block_edges.size(); ++i)
    if (!(s.block_edges[i] > s.block_edges[i - 1])) throw std::invalid_argument("block edges must increase");
  if (s.block_mass.size() + 1 != s.block_edges.size() && !(s.block_edges.empty() && s.block_mass.empty()))
    throw std::invalid_argument("one mass row per time block");
  for (const auto& row : s.block_mass)
    if (row.size() != s.cells.size()) throw std::invalid_argument("one block mass per cell");
}

}  // namespace

LevyPath inhomogeneous_levy_path(const InhomogeneousSpec& spec, const std::vector<double>& grid, Engine& rng,
                                 bool track_state) {
  check_inhomogeneous(spec);
  std::vector<double> piv(spec.cells.size());
  for (std::size_t i = 0; i < spec.cells.size(); ++i) piv[i] = real_character(spec.cells[i], spec.a, spec.pi0);
  LevyPath path;
  path.times = grid;
  if (grid.empty()) return path;
  PAdicNumber state(spec.p);
  double jumps_pi = 0.0;
  int count = 0;
  auto record = [&](double t) {
    path.jumps.push_back(count);
    path.trace.push_back(spec.drift(t) + jumps_pi);
    if (track_state) path.states.push_back(state);
  };
  record(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
      int n = poisson_draw(spec.mass_between(grid[i - 1], grid[i], static_cast<int>(c)), rng);
      for (int k = 0; k < n; ++k) {
        jumps_pi += piv[c];
        if (track_state) state += uniform_in_ball(spec.cells[c].ball, rng);
      }
      count += n;
    }
    record(grid[i]);
  }
  return path;
}

std::vector<LaplaceRow> inhomogeneous_laplace_check(const InhomogeneousSpec& spec, double t1, double t2,
                                                    const std::vector<double>& rhos, std::size_t samples,
                                                    std::uint64_t seed, unsigned workers) {
  check_inhomogeneous(spec);
  std::vector<double> diff(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Engine rng = make_stream(seed, i);
    auto path = inhomogeneous_levy_path(spec, {t1, t2}, rng, false);
    diff[i] = path.trace[1] - path.trace[0];
  });
  std::vector<LaplaceRow> rows;
  for (double rho : rhos) {
    std::vector<double> e(samples);
    for (std::size_t i = 0; i < samples; ++i) e[i] = std::exp(-rho * diff[i]);
    auto ms = mean_se(e);
    double expo = rho * (spec.drift(t2) - spec.drift(t1));
    for (std::size_t c = 0; c < spec.cells.size(); ++c)
      expo += -std::expm1(-rho * real_character(spec.cells[c], spec.a, spec.pi0)) *
              spec.mass_between(t1, t2, static_cast<int>(c));
    LaplaceRow r;
    r.rho = rho;
    r.empirical = ms.mean;
    r.se = ms.se;
    r.exact = std::exp(-expo);
    r.z = ms.se > 0.0 ? (ms.mean - r.exact) / ms.se : (ms.mean == r.exact ? 0.0 : INFINITY);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace padic
