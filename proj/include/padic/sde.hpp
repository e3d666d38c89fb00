#pragma once

#include "padic/geodesic.hpp"
#include "padic/levy_poisson.hpp"
#include "padic/qgaussian.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

struct UnsampledDriver : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct ChartEscape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using State = std::vector<PAdicNumber>;

// Time ball t0 + p^r Z_p cut into the nested partitions of levels 0..L. Node
// tau in [0, p^L) stands for t0 + p^r tau; sigma_n(tau) = tau mod p^n is the
// representative of its level-n ball.
struct TimeGrid {
  unsigned p = 2;
  PAdicNumber t0{2};
  int r = 0;
  int L = 1;
  int precision = 32;

  TimeGrid() = default;
  TimeGrid(unsigned p, const PAdicNumber& t0, int r, int L);
  std::size_t size() const;
  PAdicNumber time(std::size_t tau) const;
  static std::size_t sigma(std::size_t tau, int n, unsigned p);
  std::size_t sigma(std::size_t tau, int n) const { return sigma(tau, n, p); }
  int digits(std::size_t tau) const;    // levels needed to reach tau
  std::size_t parent(std::size_t tau) const;  // drops the leading digit; tau > 0
  double monna(std::size_t tau) const;  // sum a_j p^j -> sum a_j p^(-j-1)
};

// Driver values w(tau) at the grid nodes.
struct DriverPath {
  int dim = 1;
  std::vector<State> w;
  const State& at(std::size_t tau) const;
};

DriverPath zero_driver(const TimeGrid& grid, int dim, int precision = default_precision());
// w(tau) = W(monna(tau)) for a real-time q-Wiener path W
DriverPath wiener_driver(const TimeGrid& grid, const WienerSampler& sampler, std::uint64_t seed, std::uint64_t stream);
// same with a compound Poisson path (dimension 1)
DriverPath poisson_driver(const TimeGrid& grid, const LevySpec& spec, std::uint64_t seed, std::uint64_t stream);

// d xi = a(t, xi) dt + E(t, xi) dw. Coefficients are polynomials in (t, x_1..x_d);
// E is d x dw, stored row-major.
struct SdeSpec {
  unsigned p = 2;
  int d = 1;
  int dw = 1;
  int precision = 32;
  std::vector<Poly> a;
  std::vector<Poly> E;
  int radius = 0;     // state ball |x| <= p^radius
  double C1 = 0.0;    // declared moment constants
  double C2 = 0.0;

  SdeSpec() = default;
  SdeSpec(unsigned p, int d, int dw, int precision = default_precision());
  Poly& drift(int i) { return a.at(i); }
  Poly& diffusion(int i, int j) { return E.at(i * dw + j); }
  const Poly& diffusion(int i, int j) const { return E.at(i * dw + j); }
  State drift_at(const PAdicNumber& t, const State& x) const;
  std::vector<State> diffusion_at(const PAdicNumber& t, const State& x) const;
  // a dt + E dw
  State increment(const PAdicNumber& t, const State& x, const PAdicNumber& dt, const State& dwv) const;
  double drift_lipschitz() const;      // Cauchy bound on the state ball
  double diffusion_lipschitz() const;
};

// Sum over the digit path of target of g(sigma_n, xi(sigma_n)) (sigma_{n+1} - sigma_n),
// or of g (w(sigma_{n+1}) - w(sigma_n))_component when a driver is given, for n < level.
// states may be empty when g does not depend on x.
PAdicNumber phat_integral(const Poly& g, const TimeGrid& grid, const std::vector<State>& states,
                          const DriverPath* driver, int component, std::size_t target, int level);

struct SdeSolution {
  std::vector<State> states;       // per node
  int iterations = 0;
  double certificate = 0.0;        // Lipschitz constant of the Picard map
  double observed_ratio = 0.0;     // max ratio of successive corrections
  std::vector<double> corrections;
  double residual = 0.0;           // max |xi(c) - xi(parent) - increment|
  bool left_ball = false;
};

// Picard iteration over the whole tree; throws NoContraction when the
// certificate is >= 1 (unless require_certificate is false: on a finite tree
// the iteration still settles after L + 1 passes) and BudgetExceeded past
// max_iterations.
SdeSolution solve_sde(const SdeSpec& spec, const TimeGrid& grid, const State& xi0, const DriverPath& driver,
                      int max_iterations = 200, bool require_certificate = true);

// max over level-(level+1) nodes of |xi(tau) - xi(sigma_level tau)| and the
// bound max(|a| |dt|, |E| |dw|) built from the same edges
struct RefinementDelta {
  double delta = 0.0;
  double bound = 0.0;
};
RefinementDelta refinement_delta(const SdeSpec& spec, const TimeGrid& grid, const SdeSolution& sol,
                                 const DriverPath& driver, int level);

// J(phi, a, E) at x: phi'(x) a and phi'(x) E
struct JTransform {
  State Ja;
  std::vector<State> JE;  // rows of phi'(x) E
};
JTransform ito_transform_J(const PolyMap& phi, const SdeSpec& spec, const PAdicNumber& t, const State& x);

// phi(xi) along the solution against the transformed increments
struct JPathCheck {
  double max_residual = 0.0;  // |phi(xi(c)) - phi(xi(u)) - J a dt - J E dw|
  double max_bound = 0.0;     // |phi|_R p^(-2R) |h|^2 per edge, maximised
  bool within = true;         // residual <= bound on every edge
};
JPathCheck ito_path_check(const PolyMap& phi, const SdeSpec& spec, const TimeGrid& grid, const SdeSolution& sol,
                          const DriverPath& driver);

// Taylor series of phi(x + s h) in s: its s^1 coefficient against phi'(x) h, and
// the higher-order remainder that the closed form leaves out.
struct JSeriesCheck {
  double first_order_gap = 0.0;  // |c_1 - phi'(x) h|
  double sum_gap = 0.0;          // |sum_m c_m - (phi(x + h) - phi(x))|
  double higher_order = 0.0;     // |sum_{m >= 2} c_m|
};
JSeriesCheck j_series_check(const PolyMap& phi, const State& x, const State& h);

using Matrix = std::vector<State>;
Matrix matmul(const Matrix& A, const Matrix& B);
double max_abs_diff(const Matrix& A, const Matrix& B);
// |J(phi o psi)(x) - J(phi)(psi(x)) J(psi)(x)|
double cocycle_gap(const PolyMap& phi, const PolyMap& psi, const State& x);

// Pushforward of the coefficients to chart 1 through the atlas transition.
SdeSpec pushforward(const SdeSpec& spec, const ChartAtlas& atlas);

struct ChartState {
  int chart = 0;
  State x;
};

// Stepwise flow x -> exp_x(a dt + E dw) along the digit path, switching chart
// when the state leaves the current chart ball.
class EvolutionFamily {
 public:
  EvolutionFamily(SdeSpec spec, ChartAtlas atlas, TimeGrid grid);
  const TimeGrid& grid() const { return grid_; }
  const ChartAtlas& atlas() const { return atlas_; }
  // S(t, s) x for s on the digit path of t; throws ChartEscape
  ChartState apply(const DriverPath& w, std::size_t t, std::size_t s, ChartState x) const;
  // chart 0 coefficients everywhere, no ball checks
  State single_chart(const DriverPath& w, std::size_t t, std::size_t s, State x) const;
  State to_chart0(const ChartState& x) const;
  ChartState from_chart0(const State& x) const;  // chart 0 when it contains x

 private:
  ChartState step(const DriverPath& w, std::size_t u, std::size_t c, const ChartState& x, bool glue) const;
  std::vector<SdeSpec> specs_;
  ChartAtlas atlas_;
  TimeGrid grid_;
};

struct EvolutionReport {
  std::size_t paths = 0;
  std::size_t escaped = 0;
  double escape_fraction = 0.0;
  double evolution_gap = 0.0;  // max |S(t,t0) x - S(t,s) S(s,t0) x| over surviving paths
  double glue_gap = 0.0;       // max |glued - single chart| in chart 0 coordinates
  double flow_gap = -1.0;      // max |single chart S(t,t0) xi0 - solve_sde|; -1 when chart 0 is curved
};
EvolutionReport evolution_check(const EvolutionFamily& fam, const SdeSpec& spec, const State& x0,
                                const std::function<DriverPath(std::uint64_t)>& make_driver, std::size_t paths,
                                unsigned workers = 1);

struct MomentReport {
  double q = 0.0;      // sup over nodes of E |xi(u)|^s
  double q_se = 0.0;
  double rhs = 0.0;    // max(|xi0|^s, |t - t0| (C1 + C2 q))
  bool holds = false;  // q <= rhs + 3 se
  std::vector<double> level_increment;  // E of the edge-averaged |xi(c) - xi(parent)| per level
  std::vector<double> level_sup;        // E of the largest edge increment per level
  bool increments_shrink = false;       // level_increment non-increasing within 3 se
  std::size_t paths = 0;
};
MomentReport moment_bound_check(const SdeSpec& spec, const TimeGrid& grid, const State& xi0, int s,
                                const std::function<DriverPath(std::uint64_t)>& make_driver, std::size_t paths,
                                unsigned workers = 1);

}  // namespace padic
