#include "padic/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace padic {

namespace {

double max_norm(const std::vector<PAdicNumber>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

std::vector<PAdicNumber> sub(const std::vector<PAdicNumber>& a, const std::vector<PAdicNumber>& b) {
  std::vector<PAdicNumber> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

std::vector<PAdicNumber> matvec(const std::vector<std::vector<PAdicNumber>>& A, const std::vector<PAdicNumber>& u) {
  std::vector<PAdicNumber> r;
  for (const auto& row : A) {
    PAdicNumber acc(u.at(0).prime(), u.at(0).precision());
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * u[j];
    r.push_back(acc);
  }
  return r;
}

// largest |1/(n+1)| over the power-basis antiderivation with `cap` coefficients
double antiderivative_norm(unsigned p, Basis basis, int cap) {
  if (basis == Basis::mahler) return 1.0;
  int v = 0;
  for (long long n = 1; n < cap; ++n) v = std::max(v, valuation_of(BigInt(n), p));
  return std::pow(static_cast<double>(p), v);
}

int default_cap(int precision) { return precision + 9; }

}  // namespace

MahlerFunction antiderive(const MahlerFunction& f) {
  MahlerFunction r;
  for (const auto& s : f) {
    if (s.basis() != Basis::mahler) throw std::invalid_argument("antiderive expects Mahler coefficients");
    r.push_back(s.antiderive());
  }
  return r;
}

std::vector<PAdicNumber> eval(const MahlerFunction& f, const PAdicNumber& b) {
  std::vector<PAdicNumber> r;
  for (const auto& s : f) r.push_back(s.eval(b));
  return r;
}

ChristoffelField::ChristoffelField(unsigned p, int d, int precision)
    : p_(p), d_(d), prec_(precision), g_(static_cast<std::size_t>(d * d * d), Poly(p, d, precision)) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
}

ChristoffelField ChristoffelField::zero(unsigned p, int d, int precision) { return ChristoffelField(p, d, precision); }

void ChristoffelField::set(int k, int i, int j, const Poly& g) {
  if (g.nvars() != d_ || g.prime() != p_) throw std::invalid_argument("Christoffel entry has the wrong shape");
  g_.at((k * d_ + i) * d_ + j) = g;
  g_.at((k * d_ + j) * d_ + i) = g;
}

const Poly& ChristoffelField::at(int k, int i, int j) const { return g_.at((k * d_ + i) * d_ + j); }

bool ChristoffelField::is_zero() const {
  return std::all_of(g_.begin(), g_.end(), [](const Poly& g) { return g.is_zero(); });
}

std::vector<PAdicNumber> ChristoffelField::apply(const std::vector<PAdicNumber>& x, const std::vector<PAdicNumber>& u,
                                                 const std::vector<PAdicNumber>& v) const {
  std::vector<PAdicNumber> r(d_, PAdicNumber(p_, prec_));
  for (int k = 0; k < d_; ++k)
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        const Poly& g = at(k, i, j);
        if (g.is_zero()) continue;
        r[k] += g.eval(x) * u[i] * v[j];
      }
  return r;
}

std::vector<Series> ChristoffelField::apply(const std::vector<Series>& x, const std::vector<Series>& u,
                                            const std::vector<Series>& v) const {
  const Series& ref = x.at(0);
  std::vector<Series> r(d_, Series(p_, ref.basis(), ref.cap(), ref.precision()));
  for (int k = 0; k < d_; ++k)
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        const Poly& g = at(k, i, j);
        if (g.is_zero()) continue;
        Series gx = g.degree() == 0 ? Series::constant(g.terms().begin()->second, ref.basis(), ref.cap())
                                    : eval(g, x);
        r[k] = r[k] + gx * u[i] * v[j];
      }
  return r;
}

double ChristoffelField::norm(int radius_exponent) const {
  double m = 0.0;
  for (const auto& g : g_) m = std::max(m, g.gauss_norm(radius_exponent));
  return m;
}

double contraction_bound(double gamma_norm, double eps, unsigned p, Basis basis, int cap, int chart_radius) {
  if (gamma_norm == 0.0) return 0.0;
  const double pn = antiderivative_norm(p, basis, cap);
  const double eps_c = std::max(eps, pn * gamma_norm * eps * eps);
  const double lip_c = eps_c * eps_c * pn * pn * std::pow(static_cast<double>(p), -chart_radius);
  return gamma_norm * std::max(eps_c * pn, lip_c);
}

std::vector<PAdicNumber> GeodesicResult::at(const PAdicNumber& b) const {
  if (!b.is_zero() && b.valuation() < domain_exponent)
    throw std::domain_error("parameter outside the certified domain p^k Z_p");
  PAdicNumber bp = b.is_zero() ? b : b.mul_p_power(-domain_exponent);
  std::vector<PAdicNumber> r;
  for (const auto& s : c) r.push_back(s.eval(bp));
  return r;
}

std::vector<PAdicNumber> GeodesicResult::velocity(const PAdicNumber& b) const {
  if (!c.empty() && c[0].basis() != Basis::power) throw std::logic_error("velocity needs the power basis");
  if (!b.is_zero() && b.valuation() < domain_exponent)
    throw std::domain_error("parameter outside the certified domain p^k Z_p");
  PAdicNumber bp = b.is_zero() ? b : b.mul_p_power(-domain_exponent);
  std::vector<PAdicNumber> r;
  for (const auto& s : cdot) r.push_back(s.eval(bp).mul_p_power(-domain_exponent));
  return r;
}

GeodesicResult geodesic_solve(const ChristoffelField& gamma, const std::vector<PAdicNumber>& x0,
                              const std::vector<PAdicNumber>& y0, const GeodesicOptions& opt) {
  const int d = gamma.dim();
  if (static_cast<int>(x0.size()) != d || static_cast<int>(y0.size()) != d)
    throw std::invalid_argument("point and tangent must match the field dimension");
  const unsigned p = gamma.prime();
  const int W = x0[0].precision();
  const int cap = opt.cap > 0 ? opt.cap : default_cap(W);
  if (max_norm(x0) > std::pow(static_cast<double>(p), opt.chart_radius))
    throw std::domain_error("base point outside the chart ball");

  const double gnorm = gamma.norm(opt.chart_radius);
  const double eps = max_norm(y0);
  GeodesicResult res;
  res.p = p;
  res.x0 = x0;
  res.y0 = y0;
  int k = 0;
  for (;; ++k) {
    if (k > opt.max_rescale) throw NoContraction("no rescaling of the tangent certifies a contraction");
    const double e = eps * std::pow(static_cast<double>(p), -k);
    if (e > std::pow(static_cast<double>(p), opt.chart_radius)) continue;
    res.certificate = contraction_bound(gnorm, e, p, opt.basis, cap, opt.chart_radius);
    if (res.certificate < 1.0) break;
  }
  res.domain_exponent = k;
  std::vector<PAdicNumber> y(y0);
  for (auto& v : y)
    if (!v.is_zero()) v = v.mul_p_power(k);

  std::vector<Series> base, speed;
  for (int i = 0; i < d; ++i) {
    base.push_back(Series::constant(x0[i], opt.basis, cap) +
                   Series::identity(p, opt.basis, cap, W).scaled(y[i]));
    speed.push_back(Series::constant(y[i], opt.basis, cap));
  }
  std::vector<Series> f = opt.f0;
  if (f.empty()) f.assign(d, Series(p, opt.basis, cap, W));
  if (static_cast<int>(f.size()) != d) throw std::invalid_argument("initial iterate has the wrong dimension");

  const double tol = std::pow(static_cast<double>(p), -(W - 2));
  const double ratio_floor = std::pow(static_cast<double>(p), -(W - 8));
  double prev = -1.0;
  auto curve = [&](const std::vector<Series>& g) {
    res.c.clear();
    res.cdot.clear();
    for (int i = 0; i < d; ++i) {
      Series pf = g[i].antiderive();
      res.cdot.push_back(speed[i] + pf);
      res.c.push_back(base[i] + pf.antiderive());
    }
  };
  for (int m = 0;; ++m) {
    if (m >= opt.max_iterations) throw BudgetExceeded("Picard iteration did not settle within the budget");
    curve(f);
    std::vector<Series> next = gamma.apply(res.c, res.cdot, res.cdot);
    for (auto& s : next) s = s.scaled(PAdicNumber::from_int(p, -1, W));
    double diff = 0.0;
    for (int i = 0; i < d; ++i) diff = std::max(diff, (next[i] - f[i]).norm());
    if (prev > ratio_floor) res.observed_ratio = std::max(res.observed_ratio, diff / prev);
    prev = diff;
    f = std::move(next);
    res.iterations = m + 1;
    res.last_correction = diff;
    if (diff < tol) break;
  }
  curve(f);
  res.f = f;
  return res;
}

std::vector<PAdicNumber> exp_map(const ChristoffelField& gamma, const std::vector<PAdicNumber>& x0,
                                 const std::vector<PAdicNumber>& S, const GeodesicOptions& opt) {
  GeodesicResult g = geodesic_solve(gamma, x0, S, opt);
  if (g.domain_exponent > 0) throw NoContraction("tangent vector outside the certified radius of exp");
  return g.at(PAdicNumber::from_int(gamma.prime(), 1, x0.at(0).precision()));
}

double geodesic_residual(const ChristoffelField& gamma, const GeodesicResult& g, const std::vector<PAdicNumber>& bs) {
  if (g.c.empty()) return 0.0;
  const bool power = g.c[0].basis() == Basis::power;
  std::vector<Series> first, second;
  for (const auto& s : g.c) {
    first.push_back(power ? s.derivative() : s.forward_difference());
    second.push_back(power ? first.back().derivative() : first.back().forward_difference());
  }
  double worst = 0.0;
  for (const auto& b : bs) {
    std::vector<PAdicNumber> x, u, acc;
    for (std::size_t i = 0; i < g.c.size(); ++i) {
      x.push_back(g.c[i].eval(b));
      u.push_back(first[i].eval(b));
      acc.push_back(second[i].eval(b));
    }
    std::vector<PAdicNumber> gx = gamma.apply(x, u, u);
    for (std::size_t i = 0; i < acc.size(); ++i) worst = std::max(worst, (acc[i] + gx[i]).norm());
  }
  return worst;
}

Poly truncated(const Poly& f, int degree) {
  Poly r(f.prime(), f.nvars(), f.precision());
  for (const auto& [e, c] : f.terms()) {
    int s = 0;
    for (int k : e) s += k;
    if (s <= degree) r.add_term(e, c);
  }
  return r;
}

ChartAtlas quadratic_atlas(const PAdicNumber& alpha, int degree_cap) {
  const unsigned p = alpha.prime();
  const int W = alpha.precision();
  const int D = degree_cap > 0 ? degree_cap : W + 8;
  const PAdicNumber two = PAdicNumber::from_int(p, 2, W);
  if ((two * alpha).norm() >= 1.0) throw std::domain_error("need |2 alpha| < 1 for a bijection of Z_p");

  Poly x = Poly::variable(p, 1, 0, W);
  Poly phi = x + (x * x).scaled(alpha);
  Poly psi = x;  // psi = x - alpha psi^2, one more degree per pass
  for (int n = 0; n <= D; ++n) psi = truncated(x - (psi * psi).scaled(alpha), D);

  // Gamma_l(x) = -phi''(psi) / phi'(psi)^2 = -2 alpha (1 + u)^-2, u = 2 alpha psi
  Poly u = psi.scaled(two * alpha);
  Poly inv(p, 1, W);
  for (int n = D; n >= 0; --n)
    inv = truncated(inv * (-u), D) + Poly::constant(p, 1, PAdicNumber::from_int(p, n + 1, W));
  Poly gl = truncated(inv.scaled(-(two * alpha)), D);

  ChartAtlas atlas;
  Ball unit(PAdicNumber(p, W), 0);
  ChristoffelField flat(p, 1, W);
  ChristoffelField pulled(p, 1, W);
  pulled.set(0, 0, 0, gl);
  atlas.charts = {Chart{unit, flat}, Chart{unit, pulled}};
  atlas.transition = {phi};
  atlas.inverse = {psi};
  atlas.derivative_bound = std::max(1.0, (two * alpha).norm());
  return atlas;
}

namespace {

std::vector<std::vector<PAdicNumber>> invert(std::vector<std::vector<PAdicNumber>> A) {
  const std::size_t n = A.size();
  const unsigned p = A.at(0).at(0).prime();
  const int W = A[0][0].precision();
  std::vector<std::vector<PAdicNumber>> I(n, std::vector<PAdicNumber>(n, PAdicNumber(p, W)));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = PAdicNumber::from_int(p, 1, W);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col; r < n; ++r)
      if (A[r][col].norm() > A[piv][col].norm()) piv = r;
    if (A[piv][col].is_zero()) throw std::domain_error("singular transition matrix");
    std::swap(A[piv], A[col]);
    std::swap(I[piv], I[col]);
    PAdicNumber s = A[col][col].inv();
    for (std::size_t j = 0; j < n; ++j) {
      A[col][j] *= s;
      I[col][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      PAdicNumber f = A[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        A[r][j] -= f * A[col][j];
        I[r][j] -= f * I[col][j];
      }
    }
  }
  return I;
}

PolyMap affine_map(const std::vector<std::vector<PAdicNumber>>& A, const std::vector<PAdicNumber>& shift) {
  const int n = static_cast<int>(A.size());
  const unsigned p = shift.at(0).prime();
  const int W = shift[0].precision();
  PolyMap r;
  for (int k = 0; k < n; ++k) {
    Poly f = Poly::constant(p, n, shift[k]);
    for (int i = 0; i < n; ++i) f = f + Poly::variable(p, n, i, W).scaled(A[k][i]);
    r.push_back(f);
  }
  return r;
}

}  // namespace

ChartAtlas affine_atlas(const ChristoffelField& gamma, const Ball& ball, const std::vector<std::vector<PAdicNumber>>& A,
                        const std::vector<PAdicNumber>& shift) {
  const int d = gamma.dim();
  if (static_cast<int>(A.size()) != d || static_cast<int>(shift.size()) != d)
    throw std::invalid_argument("affine data has the wrong dimension");
  auto Ainv = invert(A);
  std::vector<PAdicNumber> back = matvec(Ainv, shift);
  for (auto& v : back) v = -v;

  ChartAtlas atlas;
  atlas.transition = affine_map(A, shift);
  atlas.inverse = affine_map(Ainv, back);
  // Gamma_l(x)(u, v) = A Gamma_j(psi(x))(A^-1 u, A^-1 v)
  ChristoffelField gl(gamma.prime(), d, gamma.precision());
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        Poly acc(gamma.prime(), d, gamma.precision());
        for (int m = 0; m < d; ++m)
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              const Poly& g = gamma.at(m, i, j);
              if (g.is_zero()) continue;
              acc = acc + g.compose(atlas.inverse).scaled(A[k][m] * Ainv[i][a] * Ainv[j][b]);
            }
        gl.set(k, a, b, acc);
      }
  atlas.charts = {Chart{ball, gamma}, Chart{ball, gl}};
  double sup = 0.0;
  for (const auto& row : A)
    for (const auto& v : row) sup = std::max(sup, v.norm());
  atlas.derivative_bound = sup;
  return atlas;
}

CompatReport transition_compat_check(const ChartAtlas& atlas, const std::vector<std::vector<PAdicNumber>>& points,
                                     const std::vector<std::vector<PAdicNumber>>& dirs) {
  if (atlas.charts.size() != 2) throw std::invalid_argument("compatibility needs two charts");
  if (dirs.empty()) throw std::invalid_argument("no directions");
  const ChristoffelField& gj = atlas.charts[0].gamma;
  const ChristoffelField& gl = atlas.charts[1].gamma;
  const int d = gj.dim();
  const int R = atlas.charts[0].ball.radius_exponent();

  // second derivatives of the transition, d^2 phi_k / dx_i dx_j
  std::vector<Poly> hess;
  CompatReport rep;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      Poly di = atlas.transition[k].derivative(i);
      rep.derivative_sup = std::max(rep.derivative_sup, di.gauss_norm(R));
      for (int j = 0; j < d; ++j) hess.push_back(di.derivative(j));
    }

  for (std::size_t n = 0; n < points.size(); ++n) {
    const auto& y = points[n];
    const auto& u = dirs[n % dirs.size()];
    const auto& v = dirs[(n + 1) % dirs.size()];
    auto J = jacobian(atlas.transition, y);
    auto x = eval(atlas.transition, y);
    auto lhs = matvec(J, gj.apply(y, u, v));
    auto rhs = gl.apply(x, matvec(J, u), matvec(J, v));
    for (int k = 0; k < d; ++k) {
      PAdicNumber h(y[0].prime(), y[0].precision());
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Poly& hk = hess[(k * d + i) * d + j];
          if (!hk.is_zero()) h += hk.eval(y) * u[i] * v[j];
        }
      rep.max_residual = std::max(rep.max_residual, (lhs[k] - h - rhs[k]).norm());
    }
    rep.round_trip = std::max(rep.round_trip, max_norm(sub(eval(atlas.inverse, x), y)));
    ++rep.samples;
  }
  return rep;
}

double geodesic_agreement(const ChartAtlas& atlas, const std::vector<PAdicNumber>& x0,
                          const std::vector<PAdicNumber>& y0, const std::vector<PAdicNumber>& bs,
                          const GeodesicOptions& opt) {
  GeodesicResult g0 = geodesic_solve(atlas.charts.at(0).gamma, x0, y0, opt);
  auto x1 = eval(atlas.transition, x0);
  auto y1 = matvec(jacobian(atlas.transition, x0), y0);
  GeodesicResult g1 = geodesic_solve(atlas.charts.at(1).gamma, x1, y1, opt);
  double gap = 0.0;
  for (const auto& b : bs) gap = std::max(gap, max_norm(sub(eval(atlas.transition, g0.at(b)), g1.at(b))));
  return gap;
}

}  // namespace padic
