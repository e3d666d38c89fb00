#include "padic/qgaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padic {

namespace {

using u128 = unsigned __int128;

std::vector<std::size_t> axis_indices(const GridFunction& g, std::size_t flat) {
  std::vector<std::size_t> idx(g.dim());
  for (int k = g.dim() - 1; k >= 0; --k) {
    idx[k] = flat % g.side();
    flat /= g.side();
  }
  return idx;
}

void pair_sum(const Eigen::MatrixXd& B, std::vector<int>& rest, double prod, double& acc) {
  if (rest.empty()) {
    acc += prod;
    return;
  }
  int first = rest.front();
  for (std::size_t k = 1; k < rest.size(); ++k) {
    int other = rest[k];
    std::vector<int> next;
    next.reserve(rest.size() - 2);
    for (std::size_t m = 1; m < rest.size(); ++m)
      if (m != k) next.push_back(rest[m]);
    pair_sum(B, next, prod * B(first, other), acc);
  }
}

}  // namespace

QGaussianSpec QGaussianSpec::scaled(double t) const {
  QGaussianSpec s = *this;
  s.B = t * B;
  return s;
}

void validate(const QGaussianSpec& spec) {
  if (!(spec.q > 0.0)) throw std::invalid_argument("q must be positive");
  if (spec.B.rows() != spec.B.cols() || spec.B.rows() < 1) throw std::invalid_argument("B must be square");
  if ((spec.B - spec.B.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("B must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.B);
  if (es.eigenvalues().minCoeff() < -1e-12) throw std::invalid_argument("B must be nonnegative definite");
  if (!spec.gamma.empty() && static_cast<int>(spec.gamma.size()) != spec.dim())
    throw std::invalid_argument("gamma has the wrong dimension");
}

bool is_zero_covariance(const QGaussianSpec& spec) { return spec.B.cwiseAbs().maxCoeff() == 0.0; }

std::vector<double> v_q(const std::vector<PAdicNumber>& z, double q) {
  std::vector<double> v(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) v[k] = z[k].is_zero() ? 0.0 : std::pow(z[k].norm(), q / 2.0);
  return v;
}

cplx char_functional(const QGaussianSpec& spec, const std::vector<PAdicNumber>& z) {
  if (static_cast<int>(z.size()) != spec.dim()) throw std::invalid_argument("point has the wrong dimension");
  auto v = v_q(z, spec.q);
  Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
  double quad = vv.dot(spec.B * vv);
  cplx phase(1.0, 0.0);
  if (!spec.gamma.empty()) {
    PAdicNumber s(spec.p, z.front().precision());
    for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * spec.gamma[k];
    phase = char_chi(s);
  }
  return std::exp(-quad) * phase;
}

GridFunction char_grid(const QGaussianSpec& spec) {
  validate(spec);
  const int d = spec.dim();
  GridFunction F(spec.p, d, spec.N, spec.M);
  const std::uint64_t P = upow(spec.p, spec.M + spec.N);
  std::vector<std::uint64_t> g(d, 0);
  if (!spec.gamma.empty()) {
    GridFunction f(spec.p, 1, spec.M, spec.N);
    for (int k = 0; k < d; ++k) g[k] = f.axis_index(spec.gamma[k]);
  }
  std::vector<double> v(d);
  Eigen::Map<Eigen::VectorXd> vv(v.data(), d);
  for (std::size_t flat = 0; flat < F.size(); ++flat) {
    auto j = axis_indices(F, flat);
    std::uint64_t ph = 0;
    for (int k = 0; k < d; ++k) {
      double n = F.axis_norm(j[k]);
      v[k] = n == 0.0 ? 0.0 : std::pow(n, spec.q / 2.0);
      ph = static_cast<std::uint64_t>((static_cast<u128>(j[k]) * g[k] + ph) % P);
    }
    double quad = vv.dot(spec.B * vv);
    long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(ph) / static_cast<long double>(P);
    F[flat] = std::exp(-quad) * cplx(static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang)));
  }
  return F;
}

GridFunction density(const QGaussianSpec& spec) {
  validate(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.B);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    throw DegenerateCovariance("B is not positive definite; the measure has an atomic part (use the point-mass case)");
  return fourier(char_grid(spec), true);
}

Lattice Lattice::for_levels(unsigned p, int d, int M, int N, int refine) {
  Lattice L;
  L.p = p;
  L.d = d;
  L.M = M;
  int digits = M + N + std::max(refine, 0);
  // keep p^digits below 2^62 so sums and products stay exact
  while (digits > M + N && std::log2(static_cast<double>(p)) * digits > 62.0) --digits;
  if (std::log2(static_cast<double>(p)) * digits > 62.0) throw SizeOverflow("lattice does not fit in 62 bits");
  L.digits = digits;
  L.modulus = upow(p, digits);
  return L;
}

double Lattice::norm(std::uint64_t a) const {
  if (a == 0) return 0.0;
  return std::pow(static_cast<double>(p), M - uvaluation(a, p));
}

double Lattice::max_norm(const std::vector<std::uint64_t>& x) const {
  double m = 0.0;
  for (auto a : x) m = std::max(m, norm(a));
  return m;
}

PAdicNumber Lattice::to_padic(std::uint64_t a) const {
  return PAdicNumber::from_bigint(p, BigInt(a)).mul_p_power(-M);
}

cplx Lattice::character(const std::vector<std::uint64_t>& j, int N, const std::vector<std::uint64_t>& x) const {
  const std::uint64_t P = upow(p, M + N);
  std::uint64_t ph = 0;
  for (std::size_t k = 0; k < x.size(); ++k)
    ph = static_cast<std::uint64_t>((static_cast<u128>(j[k] % P) * (x[k] % P) + ph) % P);
  long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(ph) / static_cast<long double>(P);
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

CosetSampler::CosetSampler(const GridFunction& dens, const Lattice& lattice) : shape_(dens.prime(), dens.dim(), dens.support_exponent(), dens.resolution_exponent()), lattice_(lattice) {
  if (lattice.p != dens.prime() || lattice.d != dens.dim() || lattice.M != dens.support_exponent() ||
      lattice.digits < dens.support_exponent() + dens.resolution_exponent())
    throw std::invalid_argument("lattice does not match the density grid");
  cdf_.resize(dens.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i) {
    double w = dens[i].real();
    if (w < 0.0) {
      clipped_ += -w * dens.cell_measure();
      w = 0.0;
    }
    acc += w;
    cdf_[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("density has no positive mass");
}

LatticePoint CosetSampler::sample(Engine& rng) const {
  std::uniform_real_distribution<double> u(0.0, cdf_.back());
  double x = u(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
  std::size_t flat = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  auto idx = axis_indices(shape_, flat);
  const std::uint64_t side = shape_.side();
  const std::uint64_t extra = lattice_.modulus / side;
  std::uniform_int_distribution<std::uint64_t> r(0, extra - 1);
  LatticePoint pt(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) pt[k] = idx[k] + side * r(rng);
  return pt;
}

std::vector<LatticePoint> sample(const QGaussianSpec& spec, std::size_t count, Engine& rng, int refine) {
  validate(spec);
  Lattice lat = Lattice::for_levels(spec.p, spec.dim(), spec.M, spec.N, refine);
  std::vector<LatticePoint> out;
  out.reserve(count);
  if (is_zero_covariance(spec)) {
    LatticePoint g(spec.dim(), 0);
    for (int k = 0; k < spec.dim() && !spec.gamma.empty(); ++k)
      g[k] = static_cast<std::uint64_t>(spec.gamma[k].coset_index(spec.M, lat.digits));
    out.assign(count, g);
    return out;
  }
  CosetSampler s(density(spec), lat);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.sample(rng));
  return out;
}

cplx empirical_char(const Lattice& lattice, const std::vector<LatticePoint>& xs, const std::vector<std::uint64_t>& j,
                    int N) {
  cplx acc(0.0, 0.0);
  for (const auto& x : xs) acc += lattice.character(j, N, x);
  return acc / static_cast<double>(xs.size());
}

double moment_wick(const Eigen::MatrixXd& B, const std::vector<int>& indices) {
  if (indices.size() % 2 == 1) return 0.0;
  for (int j : indices)
    if (j < 0 || j >= B.rows()) throw std::invalid_argument("moment index out of range");
  std::vector<int> rest(indices);
  double acc = 0.0;
  pair_sum(B, rest, 1.0, acc);
  return acc;
}

namespace {

TruncatedMoment integrate_weight(const QGaussianSpec& spec, int L, const std::function<double(const GridFunction&, const std::vector<std::size_t>&)>& w) {
  if (!spec.gamma.empty())
    for (const auto& g : spec.gamma)
      if (!g.is_zero()) throw std::invalid_argument("moments are defined for gamma = 0");
  if (L > spec.M) throw std::invalid_argument("truncation radius exceeds the realised support");
  GridFunction dens = density(spec);
  const double cap = std::pow(static_cast<double>(spec.p), L);
  double acc = 0.0;
  for (std::size_t flat = 0; flat < dens.size(); ++flat) {
    auto idx = axis_indices(dens, flat);
    bool inside = true;
    for (auto i : idx) inside = inside && dens.axis_norm(i) <= cap;
    if (!inside) continue;
    acc += w(dens, idx) * dens[flat].real();
  }
  return {acc * dens.cell_measure(), L};
}

}  // namespace

TruncatedMoment moment_numeric(const QGaussianSpec& spec, const std::vector<int>& indices, int L) {
  for (int j : indices)
    if (j < 0 || j >= spec.dim()) throw std::invalid_argument("moment index out of range");
  if (is_zero_covariance(spec)) return {0.0, L};
  const double h = spec.q / 2.0;
  return integrate_weight(spec, L, [&](const GridFunction& g, const std::vector<std::size_t>& idx) {
    double w = 1.0;
    for (int j : indices) {
      double n = g.axis_norm(idx[j]);
      w *= n == 0.0 ? 0.0 : std::pow(n, h);
    }
    return w;
  });
}

TruncatedMoment absolute_moment(const QGaussianSpec& spec, int k, double s, int L) {
  if (k < 0 || k >= spec.dim()) throw std::invalid_argument("moment index out of range");
  if (is_zero_covariance(spec)) return {0.0, L};
  return integrate_weight(spec, L, [&](const GridFunction& g, const std::vector<std::size_t>& idx) {
    double n = g.axis_norm(idx[k]);
    return n == 0.0 ? 0.0 : std::pow(n, s);
  });
}

double trace_sum(const QGaussianSpec& spec, int L) {
  double acc = 0.0;
  for (int k = 0; k < spec.dim(); ++k) acc += moment_numeric(spec, {k, k}, L).value;
  return acc;
}

WienerSampler::WienerSampler(QGaussianSpec spec, int refine)
    : spec_(std::move(spec)), lattice_(Lattice::for_levels(spec_.p, spec_.dim(), spec_.M, spec_.N, refine)) {
  validate(spec_);
  for (const auto& g : spec_.gamma)
    if (!g.is_zero()) throw std::invalid_argument("the Wiener process uses gamma = 0");
}

const CosetSampler& WienerSampler::sampler_for(double dt) const {
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = cache_.find(dt);
  if (it != cache_.end()) return *it->second;
  auto s = std::make_unique<CosetSampler>(density(spec_.scaled(dt)), lattice_);
  return *cache_.emplace(dt, std::move(s)).first->second;
}

LatticePoint WienerSampler::increment(double dt, Engine& rng) const {
  if (!(dt > 0.0)) throw std::invalid_argument("time grid must be strictly increasing");
  if (is_zero_covariance(spec_)) return LatticePoint(spec_.dim(), 0);
  return sampler_for(dt).sample(rng);
}

PathSample WienerSampler::path(const std::vector<double>& times, std::uint64_t seed, std::uint64_t stream) const {
  PathSample ps;
  ps.times = times;
  ps.seed = seed;
  ps.stream = stream;
  if (times.empty()) return ps;
  Engine rng = make_stream(seed, stream);
  LatticePoint x(spec_.dim(), 0);
  ps.states.push_back(x);
  for (std::size_t i = 1; i < times.size(); ++i) {
    auto dx = increment(times[i] - times[i - 1], rng);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = lattice_.add(x[k], dx[k]);
    ps.states.push_back(x);
  }
  return ps;
}

const ItoRow& ItoReport::at(int partition, int integrand) const {
  for (const auto& r : rows)
    if (r.partition == partition && r.integrand == integrand) return r;
  throw std::out_of_range("no such ito row");
}

ItoReport ito_check(const QGaussianSpec& spec, double a, double b, const std::vector<int>& partitions,
                    const std::vector<std::function<double(double)>>& phis,
                    const std::vector<double>& phi_integrals, std::size_t paths, std::uint64_t seed,
                    unsigned workers) {
  if (spec.dim() != 1) throw std::invalid_argument("the Ito analog is checked for d = 1");
  if (partitions.empty() || phis.size() != phi_integrals.size()) throw std::invalid_argument("bad ito_check arguments");
  const int finest = *std::max_element(partitions.begin(), partitions.end());
  for (int n : partitions)
    if (n <= 0 || finest % n != 0) throw std::invalid_argument("partition sizes must divide the finest");
  WienerSampler ws(spec);
  const double dt = (b - a) / finest;
  const std::size_t cols = partitions.size() * phis.size();
  std::vector<double> sums(paths * cols, 0.0);
  parallel_for(paths, workers, [&](std::size_t path) {
    Engine rng = make_stream(seed, path);
    std::vector<std::uint64_t> inc(finest);
    for (int i = 0; i < finest; ++i) inc[i] = ws.increment(dt, rng)[0];
    for (std::size_t pi = 0; pi < partitions.size(); ++pi) {
      const int n = partitions[pi];
      const int block = finest / n;
      for (int j = 0; j < n; ++j) {
        std::uint64_t dx = 0;
        for (int m = 0; m < block; ++m) dx = ws.lattice().add(dx, inc[j * block + m]);
        double nrm = ws.lattice().norm(dx);
        double w = nrm == 0.0 ? 0.0 : std::pow(nrm, spec.q);
        double tj = a + (b - a) * j / n;
        for (std::size_t f = 0; f < phis.size(); ++f) sums[path * cols + pi * phis.size() + f] += phis[f](tj) * w;
      }
    }
  });
  ItoReport rep;
  for (std::size_t pi = 0; pi < partitions.size(); ++pi) {
    for (std::size_t f = 0; f < phis.size(); ++f) {
      std::vector<double> col(paths);
      for (std::size_t path = 0; path < paths; ++path) col[path] = sums[path * cols + pi * phis.size() + f];
      auto ms = mean_se(col);
      ItoRow r;
      r.partition = partitions[pi];
      r.integrand = static_cast<int>(f);
      r.integral = phi_integrals[f];
      r.mean = ms.mean;
      r.se = ms.se;
      r.ratio = phi_integrals[f] != 0.0 ? ms.mean / phi_integrals[f] : 0.0;
      r.ratio_se = phi_integrals[f] != 0.0 ? ms.se / std::abs(phi_integrals[f]) : 0.0;
      rep.rows.push_back(r);
    }
  }
  return rep;
}

ChebyshevReport chebyshev_check(const QGaussianSpec& spec, const Eigen::MatrixXd& A, std::size_t samples,
                                std::uint64_t seed) {
  validate(spec);
  if (A.rows() != spec.dim() || A.cols() != spec.dim()) throw std::invalid_argument("A has the wrong shape");
  Engine rng = make_stream(seed, 0);
  auto xs = sample(spec, samples, rng);
  Lattice lat = Lattice::for_levels(spec.p, spec.dim(), spec.M, spec.N);
  std::vector<double> hit(samples);
  Eigen::VectorXd v(spec.dim());
  for (std::size_t i = 0; i < samples; ++i) {
    for (int k = 0; k < spec.dim(); ++k) {
      double n = lat.norm(xs[i][k]);
      v[k] = n == 0.0 ? 0.0 : std::pow(n, spec.q / 2.0);
    }
    hit[i] = v.dot(A * v) >= 1.0 ? 1.0 : 0.0;
  }
  auto ms = mean_se(hit);
  ChebyshevReport r;
  r.frequency = ms.mean;
  r.se = ms.se;
  r.bound = (A * spec.B).trace();
  r.samples = samples;
  return r;
}

}  // namespace padic
