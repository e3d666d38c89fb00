#include "padic/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace padic {

namespace {

double pw(unsigned p, int e) { return std::pow(static_cast<double>(p), e); }

double max_norm(const State& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

State sub(const State& a, const State& b) {
  State r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b.at(i);
  return r;
}

State add(const State& a, const State& b) {
  State r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.at(i);
  return r;
}

std::vector<PAdicNumber> with_time(const PAdicNumber& t, const State& x) {
  std::vector<PAdicNumber> v;
  v.reserve(x.size() + 1);
  v.push_back(t);
  v.insert(v.end(), x.begin(), x.end());
  return v;
}

double polys_gauss(const std::vector<Poly>& ps, int radius) {
  double m = 0.0;
  for (const auto& g : ps) m = std::max(m, g.gauss_norm(radius));
  return m;
}

}  // namespace

TimeGrid::TimeGrid(unsigned p_, const PAdicNumber& t0_, int r_, int L_)
    : p(p_), t0(t0_), r(r_), L(L_), precision(t0_.precision()) {
  if (t0_.prime() != p_) throw PrimeMismatch("time origin over a different prime");
  if (L_ < 0 || std::pow(static_cast<double>(p_), L_) > 1e7) throw std::invalid_argument("partition level out of range");
}

std::size_t TimeGrid::size() const {
  std::size_t n = 1;
  for (int i = 0; i < L; ++i) n *= p;
  return n;
}

PAdicNumber TimeGrid::time(std::size_t tau) const {
  if (tau == 0) return t0;
  return t0 + PAdicNumber::from_int(p, static_cast<long long>(tau), precision).mul_p_power(r);
}

std::size_t TimeGrid::sigma(std::size_t tau, int n, unsigned p) {
  std::size_t m = 1;
  for (int i = 0; i < n && m <= tau; ++i) m *= p;
  return tau % m;
}

int TimeGrid::digits(std::size_t tau) const {
  int k = 0;
  while (tau > 0) {
    tau /= p;
    ++k;
  }
  return k;
}

std::size_t TimeGrid::parent(std::size_t tau) const { return sigma(tau, digits(tau) - 1); }

double TimeGrid::monna(std::size_t tau) const {
  double x = 0.0, scale = 1.0 / p;
  while (tau > 0) {
    x += static_cast<double>(tau % p) * scale;
    tau /= p;
    scale /= p;
  }
  return x;
}

const State& DriverPath::at(std::size_t tau) const {
  if (tau >= w.size()) throw UnsampledDriver("driver not sampled at node " + std::to_string(tau));
  return w[tau];
}

DriverPath zero_driver(const TimeGrid& grid, int dim, int precision) {
  DriverPath d;
  d.dim = dim;
  d.w.assign(grid.size(), State(dim, PAdicNumber(grid.p, precision)));
  return d;
}

namespace {

std::vector<std::size_t> monna_order(const TimeGrid& grid) {
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid.monna(a) < grid.monna(b); });
  return order;
}

}  // namespace

DriverPath wiener_driver(const TimeGrid& grid, const WienerSampler& sampler, std::uint64_t seed, std::uint64_t stream) {
  auto order = monna_order(grid);
  std::vector<double> times;
  for (auto tau : order) times.push_back(grid.monna(tau));
  PathSample ps = sampler.path(times, seed, stream);
  const Lattice& lat = sampler.lattice();
  if (lat.p != grid.p) throw PrimeMismatch("driver and time grid use different primes");
  DriverPath d;
  d.dim = lat.d;
  d.w.resize(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    State x;
    for (auto a : ps.states[i]) x.push_back(lat.to_padic(a));
    d.w[order[i]] = std::move(x);
  }
  return d;
}

DriverPath poisson_driver(const TimeGrid& grid, const LevySpec& spec, std::uint64_t seed, std::uint64_t stream) {
  if (spec.p != grid.p) throw PrimeMismatch("driver and time grid use different primes");
  auto order = monna_order(grid);
  std::vector<double> times;
  for (auto tau : order) times.push_back(grid.monna(tau));
  Engine rng = make_stream(seed, stream);
  LevyPath path = compound_poisson_path(spec, times, rng, true);
  if (path.states.size() != times.size()) throw std::logic_error("compound Poisson path does not match the grid");
  DriverPath d;
  d.dim = 1;
  d.w.resize(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) d.w[order[i]] = {path.states[i]};
  return d;
}

SdeSpec::SdeSpec(unsigned p_, int d_, int dw_, int precision_)
    : p(p_), d(d_), dw(dw_), precision(precision_),
      a(static_cast<std::size_t>(d_), Poly(p_, d_ + 1, precision_)),
      E(static_cast<std::size_t>(d_ * dw_), Poly(p_, d_ + 1, precision_)) {
  if (d_ < 1 || dw_ < 1) throw std::invalid_argument("state and noise dimensions must be positive");
}

State SdeSpec::drift_at(const PAdicNumber& t, const State& x) const {
  auto v = with_time(t, x);
  State r;
  for (const auto& g : a) r.push_back(g.eval(v));
  return r;
}

std::vector<State> SdeSpec::diffusion_at(const PAdicNumber& t, const State& x) const {
  auto v = with_time(t, x);
  std::vector<State> r(d, State(dw, PAdicNumber(p, precision)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < dw; ++j) {
      const Poly& g = diffusion(i, j);
      if (!g.is_zero()) r[i][j] = g.eval(v);
    }
  return r;
}

State SdeSpec::increment(const PAdicNumber& t, const State& x, const PAdicNumber& dt, const State& dwv) const {
  auto v = with_time(t, x);
  State h(d, PAdicNumber(p, precision));
  for (int i = 0; i < d; ++i) {
    if (!a[i].is_zero() && !dt.is_zero()) h[i] += a[i].eval(v) * dt;
    for (int j = 0; j < dw; ++j) {
      const Poly& g = diffusion(i, j);
      if (g.is_zero() || dwv.at(j).is_zero()) continue;
      h[i] += g.eval(v) * dwv[j];
    }
  }
  return h;
}

double SdeSpec::drift_lipschitz() const { return polys_gauss(a, radius) * pw(p, -radius); }
double SdeSpec::diffusion_lipschitz() const { return polys_gauss(E, radius) * pw(p, -radius); }

PAdicNumber phat_integral(const Poly& g, const TimeGrid& grid, const std::vector<State>& states,
                          const DriverPath* driver, int component, std::size_t target, int level) {
  if (target >= grid.size()) throw std::out_of_range("target outside the grid");
  const int d = g.nvars() - 1;
  PAdicNumber sum(grid.p, grid.precision);
  for (int n = 0; n < level; ++n) {
    std::size_t u = grid.sigma(target, n), c = grid.sigma(target, n + 1);
    if (u == c) continue;
    State x = states.empty() ? State(d, PAdicNumber(grid.p, grid.precision)) : states.at(u);
    PAdicNumber gv = g.eval(with_time(grid.time(u), x));
    PAdicNumber delta = driver ? driver->at(c).at(component) - driver->at(u).at(component) : grid.time(c) - grid.time(u);
    sum += gv * delta;
  }
  return sum;
}

SdeSolution solve_sde(const SdeSpec& spec, const TimeGrid& grid, const State& xi0, const DriverPath& driver,
                      int max_iterations, bool require_certificate) {
  if (static_cast<int>(xi0.size()) != spec.d) throw std::invalid_argument("initial state has the wrong dimension");
  if (driver.dim != spec.dw) throw std::invalid_argument("driver dimension differs from the noise dimension");
  const std::size_t N = grid.size();
  std::vector<std::size_t> par(N, 0);
  std::vector<PAdicNumber> dt(N, PAdicNumber(grid.p, grid.precision));
  std::vector<State> dw(N);
  std::vector<PAdicNumber> tt(N, PAdicNumber(grid.p, grid.precision));
  double max_dw = 0.0;
  for (std::size_t c = 0; c < N; ++c) tt[c] = grid.time(c);
  for (std::size_t c = 1; c < N; ++c) {
    par[c] = grid.parent(c);
    dt[c] = tt[c] - tt[par[c]];
    dw[c] = sub(driver.at(c), driver.at(par[c]));
    max_dw = std::max(max_dw, max_norm(dw[c]));
  }
  (void)driver.at(0);  // throws when unsampled

  SdeSolution sol;
  sol.certificate = std::max(spec.drift_lipschitz() * pw(grid.p, -grid.r), spec.diffusion_lipschitz() * max_dw);
  if (require_certificate && sol.certificate >= 1.0)
    throw NoContraction("Picard map is not a contraction on the state ball; shrink the time ball");

  const double tol = pw(grid.p, -(grid.precision - 2));
  const double ratio_floor = pw(grid.p, -(grid.precision - 8));
  std::vector<State> cur(N, xi0);
  double prev = -1.0;
  for (int m = 0;; ++m) {
    if (m >= max_iterations) throw BudgetExceeded("Picard iteration did not settle within the budget");
    std::vector<State> next(N);
    next[0] = xi0;
    for (std::size_t c = 1; c < N; ++c)
      next[c] = add(next[par[c]], spec.increment(tt[par[c]], cur[par[c]], dt[c], dw[c]));
    double diff = 0.0;
    for (std::size_t c = 0; c < N; ++c) diff = std::max(diff, max_norm(sub(next[c], cur[c])));
    if (prev > ratio_floor) sol.observed_ratio = std::max(sol.observed_ratio, diff / prev);
    prev = diff;
    sol.corrections.push_back(diff);
    cur = std::move(next);
    sol.iterations = m + 1;
    if (diff < tol) break;
  }
  for (std::size_t c = 1; c < N; ++c) {
    State h = spec.increment(tt[par[c]], cur[par[c]], dt[c], dw[c]);
    sol.residual = std::max(sol.residual, max_norm(sub(sub(cur[c], cur[par[c]]), h)));
  }
  const double ball = pw(grid.p, spec.radius);
  for (const auto& x : cur)
    if (max_norm(x) > ball) sol.left_ball = true;
  sol.states = std::move(cur);
  return sol;
}

RefinementDelta refinement_delta(const SdeSpec& spec, const TimeGrid& grid, const SdeSolution& sol,
                                 const DriverPath& driver, int level) {
  RefinementDelta rd;
  const double ga = polys_gauss(spec.a, spec.radius), ge = polys_gauss(spec.E, spec.radius);
  for (std::size_t c = 1; c < grid.size(); ++c) {
    if (grid.digits(c) != level + 1) continue;
    std::size_t u = grid.sigma(c, level);
    rd.delta = std::max(rd.delta, max_norm(sub(sol.states.at(c), sol.states.at(u))));
    double dtn = (grid.time(c) - grid.time(u)).norm();
    double dwn = max_norm(sub(driver.at(c), driver.at(u)));
    rd.bound = std::max(rd.bound, std::max(ga * dtn, ge * dwn));
  }
  return rd;
}

JTransform ito_transform_J(const PolyMap& phi, const SdeSpec& spec, const PAdicNumber& t, const State& x) {
  auto J = jacobian(phi, x);
  State a = spec.drift_at(t, x);
  auto E = spec.diffusion_at(t, x);
  JTransform jt;
  for (const auto& row : J) {
    PAdicNumber s(spec.p, spec.precision);
    State e(spec.dw, PAdicNumber(spec.p, spec.precision));
    for (int i = 0; i < spec.d; ++i) {
      s += row[i] * a[i];
      for (int j = 0; j < spec.dw; ++j) e[j] += row[i] * E[i][j];
    }
    jt.Ja.push_back(s);
    jt.JE.push_back(e);
  }
  return jt;
}

JPathCheck ito_path_check(const PolyMap& phi, const SdeSpec& spec, const TimeGrid& grid, const SdeSolution& sol,
                          const DriverPath& driver) {
  JPathCheck chk;
  double phin = polys_gauss(phi, spec.radius);
  const double floor = pw(grid.p, -(grid.precision - 4));
  for (std::size_t c = 1; c < grid.size(); ++c) {
    std::size_t u = grid.parent(c);
    const State& xu = sol.states.at(u);
    PAdicNumber t = grid.time(u), dt = grid.time(c) - t;
    State dwv = sub(driver.at(c), driver.at(u));
    JTransform jt = ito_transform_J(phi, spec, t, xu);
    State h = spec.increment(t, xu, dt, dwv);
    State lhs = sub(eval(phi, sol.states.at(c)), eval(phi, xu));
    double res = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      PAdicNumber lin = jt.Ja[k] * dt;
      for (int j = 0; j < spec.dw; ++j) lin += jt.JE[k][j] * dwv[j];
      res = std::max(res, (lhs[k] - lin).norm());
    }
    double hn = max_norm(h);
    double bound = phin * pw(grid.p, -2 * spec.radius) * hn * hn;
    chk.max_residual = std::max(chk.max_residual, res);
    chk.max_bound = std::max(chk.max_bound, bound);
    if (res > std::max(bound * (1.0 + 1e-12), floor)) chk.within = false;
  }
  return chk;
}

JSeriesCheck j_series_check(const PolyMap& phi, const State& x, const State& h) {
  JSeriesCheck chk;
  if (phi.empty()) return chk;
  const unsigned p = phi[0].prime();
  const int W = x.at(0).precision();
  int deg = 0;
  for (const auto& f : phi) deg = std::max(deg, f.degree());
  const int cap = deg + 1;
  std::vector<Series> X;
  for (std::size_t i = 0; i < x.size(); ++i)
    X.push_back(Series::constant(x[i], Basis::power, cap) + Series::identity(p, Basis::power, cap, W).scaled(h[i]));
  auto J = jacobian(phi, x);
  State xh = add(x, h);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    Series s = eval(phi[k], X);
    PAdicNumber lin(p, W);
    for (std::size_t i = 0; i < x.size(); ++i) lin += J[k][i] * h[i];
    PAdicNumber first = cap > 1 ? s[1] : PAdicNumber(p, W);
    chk.first_order_gap = std::max(chk.first_order_gap, (first - lin).norm());
    PAdicNumber total(p, W), higher(p, W);
    for (int m = 1; m < cap; ++m) {
      total += s[m];
      if (m >= 2) higher += s[m];
    }
    chk.sum_gap = std::max(chk.sum_gap, (total - (phi[k].eval(xh) - phi[k].eval(x))).norm());
    chk.higher_order = std::max(chk.higher_order, higher.norm());
  }
  return chk;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  const std::size_t n = A.size(), m = B.at(0).size(), k = B.size();
  const unsigned p = B[0][0].prime();
  const int W = B[0][0].precision();
  Matrix C(n, State(m, PAdicNumber(p, W)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) C[i][j] += A[i].at(l) * B[l][j];
  return C;
}

double max_abs_diff(const Matrix& A, const Matrix& B) {
  if (A.size() != B.size()) throw std::invalid_argument("matrices of different shape");
  double m = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) m = std::max(m, max_norm(sub(A[i], B[i])));
  return m;
}

double cocycle_gap(const PolyMap& phi, const PolyMap& psi, const State& x) {
  Matrix lhs = jacobian(compose(phi, psi), x);
  Matrix rhs = matmul(jacobian(phi, eval(psi, x)), jacobian(psi, x));
  return max_abs_diff(lhs, rhs);
}

SdeSpec pushforward(const SdeSpec& spec, const ChartAtlas& atlas) {
  const int d = spec.d;
  if (static_cast<int>(atlas.transition.size()) != d || static_cast<int>(atlas.inverse.size()) != d)
    throw std::invalid_argument("transition dimension differs from the state dimension");
  const unsigned p = spec.p;
  const int W = spec.precision;
  const int cap = W + 8;
  std::vector<Poly> proj;
  for (int i = 0; i < d; ++i) proj.push_back(Poly::variable(p, d + 1, i + 1, W));
  PolyMap psi = compose(atlas.inverse, proj);
  std::vector<Poly> subst{Poly::variable(p, d + 1, 0, W)};
  subst.insert(subst.end(), psi.begin(), psi.end());

  std::vector<std::vector<Poly>> J(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) J[k].push_back(truncated(atlas.transition[k].derivative(i).compose(psi), cap));

  SdeSpec out(p, d, spec.dw, W);
  out.radius = atlas.charts.at(1).ball.radius_exponent();
  out.C1 = spec.C1;
  out.C2 = spec.C2;
  std::vector<Poly> a0, E0;
  for (const auto& g : spec.a) a0.push_back(truncated(g.compose(subst), cap));
  for (const auto& g : spec.E) E0.push_back(truncated(g.compose(subst), cap));
  for (int k = 0; k < d; ++k) {
    Poly acc(p, d + 1, W);
    for (int i = 0; i < d; ++i)
      if (!a0[i].is_zero()) acc = acc + J[k][i] * a0[i];
    out.a[k] = truncated(acc, cap);
    for (int j = 0; j < spec.dw; ++j) {
      Poly e(p, d + 1, W);
      for (int i = 0; i < d; ++i)
        if (!E0[i * spec.dw + j].is_zero()) e = e + J[k][i] * E0[i * spec.dw + j];
      out.diffusion(k, j) = truncated(e, cap);
    }
  }
  return out;
}

EvolutionFamily::EvolutionFamily(SdeSpec spec, ChartAtlas atlas, TimeGrid grid)
    : atlas_(std::move(atlas)), grid_(std::move(grid)) {
  if (atlas_.charts.empty() || atlas_.charts.size() > 2) throw std::invalid_argument("atlas needs one or two charts");
  if (atlas_.charts[0].gamma.dim() != spec.d) throw std::invalid_argument("chart dimension differs from the state");
  specs_.push_back(spec);
  if (atlas_.charts.size() == 2) specs_.push_back(pushforward(spec, atlas_));
}

ChartState EvolutionFamily::step(const DriverPath& w, std::size_t u, std::size_t c, const ChartState& x,
                                 bool glue) const {
  const SdeSpec& sp = specs_.at(x.chart);
  PAdicNumber tu = grid_.time(u);
  State h = sp.increment(tu, x.x, grid_.time(c) - tu, sub(w.at(c), w.at(u)));
  const Chart& ch = atlas_.charts[x.chart];
  State y;
  if (ch.gamma.is_zero()) {
    y = add(x.x, h);
  } else {
    GeodesicOptions opt;
    opt.chart_radius = ch.ball.radius_exponent();
    y = exp_map(ch.gamma, x.x, h, opt);
  }
  if (!glue || ch.ball.contains(y)) return {x.chart, y};
  if (atlas_.charts.size() == 2) {
    const int other = 1 - x.chart;
    State z = eval(other == 1 ? atlas_.transition : atlas_.inverse, y);
    if (atlas_.charts[other].ball.contains(z)) return {other, z};
  }
  throw ChartEscape("path left every chart between nodes " + std::to_string(u) + " and " + std::to_string(c));
}

ChartState EvolutionFamily::apply(const DriverPath& w, std::size_t t, std::size_t s, ChartState x) const {
  const int ks = grid_.digits(s), kt = grid_.digits(t);
  if (ks > kt || grid_.sigma(t, ks) != s) throw std::invalid_argument("s is not on the digit path of t");
  for (int n = ks; n < kt; ++n) {
    std::size_t u = grid_.sigma(t, n), c = grid_.sigma(t, n + 1);
    if (u != c) x = step(w, u, c, x, true);
  }
  return x;
}

State EvolutionFamily::single_chart(const DriverPath& w, std::size_t t, std::size_t s, State x) const {
  const int ks = grid_.digits(s), kt = grid_.digits(t);
  if (ks > kt || grid_.sigma(t, ks) != s) throw std::invalid_argument("s is not on the digit path of t");
  ChartState cs{0, std::move(x)};
  for (int n = ks; n < kt; ++n) {
    std::size_t u = grid_.sigma(t, n), c = grid_.sigma(t, n + 1);
    if (u != c) cs = step(w, u, c, cs, false);
  }
  return cs.x;
}

State EvolutionFamily::to_chart0(const ChartState& x) const {
  return x.chart == 0 ? x.x : eval(atlas_.inverse, x.x);
}

ChartState EvolutionFamily::from_chart0(const State& x) const {
  if (atlas_.charts[0].ball.contains(x)) return {0, x};
  if (atlas_.charts.size() == 2) {
    State z = eval(atlas_.transition, x);
    if (atlas_.charts[1].ball.contains(z)) return {1, z};
  }
  throw ChartEscape("initial state outside every chart");
}

EvolutionReport evolution_check(const EvolutionFamily& fam, const SdeSpec& spec, const State& x0,
                                const std::function<DriverPath(std::uint64_t)>& make_driver, std::size_t paths,
                                unsigned workers) {
  struct PathOut {
    bool escaped = false;
    double evo = 0.0, glue = 0.0, flow = -1.0;
  };
  std::vector<PathOut> out(paths);
  const TimeGrid& grid = fam.grid();
  const std::size_t N = grid.size();
  parallel_for(paths, workers, [&](std::size_t i) {
    PathOut& o = out[i];
    DriverPath w = make_driver(i);
    std::vector<ChartState> X(N);
    try {
      ChartState start = fam.from_chart0(x0);
      for (std::size_t t = 0; t < N; ++t) X[t] = fam.apply(w, t, 0, start);
    } catch (const ChartEscape&) {
      o.escaped = true;
      return;
    }
    for (std::size_t t = 1; t < N; ++t) {
      State direct = fam.to_chart0(X[t]);
      for (int n = 1; n < grid.digits(t); ++n) {
        std::size_t s = grid.sigma(t, n);
        State via = fam.to_chart0(fam.apply(w, t, s, X[s]));
        o.evo = std::max(o.evo, max_norm(sub(direct, via)));
      }
      o.glue = std::max(o.glue, max_norm(sub(direct, fam.single_chart(w, t, 0, x0))));
    }
    if (fam.atlas().charts[0].gamma.is_zero()) {
      try {
        SdeSolution sol = solve_sde(spec, grid, x0, w, 200, false);
        double gap = 0.0;
        for (std::size_t t = 0; t < N; ++t) gap = std::max(gap, max_norm(sub(sol.states[t], fam.single_chart(w, t, 0, x0))));
        o.flow = gap;
      } catch (const std::exception&) {
        o.flow = -1.0;
      }
    }
  });
  EvolutionReport rep;
  rep.paths = paths;
  bool flat = true;
  for (const auto& o : out) {
    if (o.escaped) {
      ++rep.escaped;
      continue;
    }
    rep.evolution_gap = std::max(rep.evolution_gap, o.evo);
    rep.glue_gap = std::max(rep.glue_gap, o.glue);
    if (o.flow < 0) flat = false;
    rep.flow_gap = std::max(rep.flow_gap, o.flow);
  }
  if (!flat) rep.flow_gap = -1.0;
  rep.escape_fraction = paths ? static_cast<double>(rep.escaped) / static_cast<double>(paths) : 0.0;
  return rep;
}

MomentReport moment_bound_check(const SdeSpec& spec, const TimeGrid& grid, const State& xi0, int s,
                                const std::function<DriverPath(std::uint64_t)>& make_driver, std::size_t paths,
                                unsigned workers) {
  if (s < 1) throw std::invalid_argument("moment order must be at least 1");
  if (paths < 2) throw std::invalid_argument("need at least two paths");
  const std::size_t N = grid.size();
  std::vector<std::vector<double>> norms(paths), incs(paths), sups(paths);
  std::vector<double> edges(grid.L, 0.0);
  for (std::size_t c = 1; c < N; ++c) edges[grid.digits(c) - 1] += 1.0;
  parallel_for(paths, workers, [&](std::size_t i) {
    DriverPath w = make_driver(i);
    SdeSolution sol = solve_sde(spec, grid, xi0, w, 200, false);
    norms[i].resize(N);
    incs[i].assign(grid.L, 0.0);
    sups[i].assign(grid.L, 0.0);
    for (std::size_t u = 0; u < N; ++u) norms[i][u] = std::pow(max_norm(sol.states[u]), s);
    for (std::size_t c = 1; c < N; ++c) {
      int lv = grid.digits(c) - 1;
      double inc = max_norm(sub(sol.states[c], sol.states[grid.parent(c)]));
      incs[i][lv] += inc / edges[lv];
      sups[i][lv] = std::max(sups[i][lv], inc);
    }
  });
  MomentReport rep;
  rep.paths = paths;
  rep.q = -1.0;
  for (std::size_t u = 0; u < N; ++u) {
    std::vector<double> col(paths);
    for (std::size_t i = 0; i < paths; ++i) col[i] = norms[i][u];
    MeanSe ms = mean_se(col);
    if (ms.mean > rep.q) {
      rep.q = ms.mean;
      rep.q_se = ms.se;
    }
  }
  rep.rhs = std::max(std::pow(max_norm(xi0), s), pw(grid.p, -grid.r) * (spec.C1 + spec.C2 * rep.q));
  // the relative slack absorbs round-off in the mean of equal terms
  rep.holds = rep.q <= rep.rhs * (1 + 1e-12) + 3.0 * rep.q_se;
  std::vector<double> se;
  for (int lv = 0; lv < grid.L; ++lv) {
    std::vector<double> col(paths);
    for (std::size_t i = 0; i < paths; ++i) col[i] = incs[i][lv];
    MeanSe ms = mean_se(col);
    rep.level_increment.push_back(ms.mean);
    se.push_back(ms.se);
    for (std::size_t i = 0; i < paths; ++i) col[i] = sups[i][lv];
    rep.level_sup.push_back(mean_se(col).mean);
  }
  rep.increments_shrink = true;
  for (int lv = 0; lv + 1 < grid.L; ++lv)
    if (rep.level_increment[lv + 1] > rep.level_increment[lv] + 3.0 * std::hypot(se[lv], se[lv + 1]))
      rep.increments_shrink = false;
  return rep;
}

}  // namespace padic
