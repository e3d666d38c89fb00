#include "padic/pseudodiff.hpp"

#include "padic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padic {

namespace {

cplx minus_i_pow(std::size_t k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

std::vector<std::vector<double>> sphere_net(int d) {
  std::vector<std::vector<double>> net;
  const double pi = std::numbers::pi;
  if (d == 1) {
    net = {{1.0}, {-1.0}};
  } else if (d == 2) {
    for (int a = 0; a < 720; ++a) net.push_back({std::cos(2 * pi * a / 720), std::sin(2 * pi * a / 720)});
  } else {
    // product of circles, normalised; dense enough for d <= 4 at desk scale
    const int steps = d == 3 ? 48 : 16;
    std::vector<int> c(d, 0);
    while (true) {
      std::vector<double> y(d);
      double n2 = 0.0;
      for (int k = 0; k < d; ++k) {
        y[k] = -1.0 + 2.0 * c[k] / steps;
        n2 += y[k] * y[k];
      }
      if (n2 > 1e-12) {
        for (auto& v : y) v /= std::sqrt(n2);
        net.push_back(y);
      }
      int k = 0;
      while (k < d && ++c[k] > steps) c[k++] = 0;
      if (k == d) break;
    }
  }
  return net;
}

}  // namespace

SymbolSpec::SymbolSpec(int d, std::vector<SymbolTerm> terms) : d_(d), terms_(std::move(terms)) {
  if (d < 1) throw std::invalid_argument("symbol dimension must be positive");
  for (const auto& t : terms_)
    for (int j : t.index)
      if (j < 0 || j >= d_) throw std::invalid_argument("symbol index out of range");
}

SymbolSpec& SymbolSpec::add(std::vector<int> index, double b) {
  for (int j : index)
    if (j < 0 || j >= d_) throw std::invalid_argument("symbol index out of range");
  terms_.push_back({std::move(index), b});
  return *this;
}

SymbolSpec SymbolSpec::laplacian_1d(double c) { return SymbolSpec(1).add({0, 0}, c); }

int SymbolSpec::order() const {
  int n = 0;
  for (const auto& t : terms_)
    if (t.b != 0.0) n = std::max(n, static_cast<int>(t.index.size()));
  return n;
}

bool SymbolSpec::has_odd_terms() const {
  for (const auto& t : terms_)
    if (t.b != 0.0 && t.index.size() % 2 == 1) return true;
  return false;
}

cplx SymbolSpec::eval(const std::vector<double>& y) const {
  cplx acc(0.0, 0.0);
  for (const auto& t : terms_) {
    double prod = t.b;
    for (int j : t.index) prod *= y[j];
    acc -= minus_i_pow(t.index.size()) * prod;
  }
  return acc;
}

cplx SymbolSpec::eval_principal(const std::vector<double>& y) const {
  const std::size_t top = static_cast<std::size_t>(order());
  cplx acc(0.0, 0.0);
  for (const auto& t : terms_) {
    if (t.index.size() != top) continue;
    double prod = t.b;
    for (int j : t.index) prod *= y[j];
    acc -= minus_i_pow(t.index.size()) * prod;
  }
  return acc;
}

SymbolSpec::Ellipticity SymbolSpec::certify(double threshold) const {
  Ellipticity e;
  e.min_symbol = e.min_principal = std::numeric_limits<double>::infinity();
  const int ord = order();
  for (const auto& dir : sphere_net(d_)) {
    cplx a0 = eval_principal(dir);
    e.min_principal = std::min(e.min_principal, a0.real());
    e.max_imag = std::max(e.max_imag, std::abs(a0.imag()));
    for (int k = -8; k <= 8; ++k) {
      double r = std::ldexp(1.0, k);
      std::vector<double> y(dir);
      for (auto& v : y) v *= r;
      cplx a = eval(y);
      double scale = std::min(1.0, std::pow(r, ord));
      e.min_symbol = std::min(e.min_symbol, a.real() / scale);
      e.max_imag = std::max(e.max_imag, std::abs(a.imag()) / scale);
    }
  }
  bool real = e.max_imag <= threshold;
  e.elliptic = ord > 0 && real && e.min_principal > threshold;
  e.strictly_elliptic = e.elliptic && e.min_symbol > threshold;
  return e;
}

GridFunction apply_multiplier(const GridFunction& f,
                              const std::function<cplx(const GridFunction&, std::size_t)>& m) {
  GridFunction F = fourier(f);
  std::vector<cplx> mult(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) mult[i] = m(F, i);
  kernels::cmul(F.values().data(), mult.data(), F.size());
  return fourier(F, true);
}

GridFunction vladimirov_apply(const GridFunction& f, cplx u, int axis) {
  if (axis < 0 || axis >= f.dim()) throw std::invalid_argument("axis out of range");
  const bool identity_at_zero = u == cplx(0.0, 0.0);
  const double lnp = std::log(static_cast<double>(f.prime()));
  return apply_multiplier(f, [&](const GridFunction& F, std::size_t flat) {
    std::size_t r = flat;
    for (int k = F.dim() - 1; k > axis; --k) r /= F.side();
    std::size_t i = r % F.side();
    if (i == 0) return identity_at_zero ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    double e = static_cast<double>(F.support_exponent() - uvaluation(i, F.prime()));
    return std::exp(u * (e * lnp));
  });
}

GridFunction operator_apply(const SymbolSpec& A, const GridFunction& f) {
  if (A.dim() != f.dim()) throw std::invalid_argument("symbol and grid dimensions differ");
  GridFunction acc(f.prime(), f.dim(), f.support_exponent(), f.resolution_exponent());
  for (const auto& t : A.terms()) {
    if (t.b == 0.0) continue;
    GridFunction g = f;
    for (int j : t.index) g = vladimirov_apply(g, cplx(1.0, 0.0), j);
    kernels::caxpy(acc.values().data(), minus_i_pow(t.index.size()) * t.b, g.values().data(), acc.size());
  }
  return acc;
}

GridFunction operator_apply_multiplier(const SymbolSpec& A, const GridFunction& f) {
  if (A.dim() != f.dim()) throw std::invalid_argument("symbol and grid dimensions differ");
  std::vector<double> y(f.dim());
  return apply_multiplier(f, [&](const GridFunction& F, std::size_t flat) {
    std::size_t r = flat;
    for (int k = F.dim() - 1; k >= 0; --k) {
      y[k] = F.axis_norm(r % F.side());
      r /= F.side();
    }
    return -A.eval(y);
  });
}

double heat_mass_deficit(const HeatMeasureSpec& spec) {
  const int d = spec.symbol.dim();
  const int S = 48;
  const double p = spec.p;
  std::vector<double> radius(S + 1), weight(S + 1);
  for (int s = 0; s < S; ++s) {
    radius[s] = std::pow(p, -static_cast<double>(spec.M + s));
    weight[s] = (1.0 - 1.0 / p) * std::pow(p, -static_cast<double>(s));
  }
  radius[S] = 0.0;
  weight[S] = std::pow(p, -static_cast<double>(S));
  std::vector<int> c(d, 0);
  std::vector<double> y(d);
  cplx avg(0.0, 0.0);
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      y[k] = radius[c[k]];
      w *= weight[c[k]];
    }
    avg += w * std::exp(-spec.t * spec.symbol.eval(y));
    int k = 0;
    while (k < d && ++c[k] > S) c[k++] = 0;
    if (k == d) break;
  }
  std::vector<double> zero(d, 0.0);
  cplx total = std::exp(-spec.t * spec.symbol.eval(zero));
  return 1.0 - (avg / total).real();
}

GridFunction heat_multiplier(const HeatMeasureSpec& spec) {
  GridFunction F(spec.p, spec.symbol.dim(), spec.N, spec.M);
  std::vector<double> y(F.dim());
  for (std::size_t flat = 0; flat < F.size(); ++flat) {
    std::size_t r = flat;
    for (int k = F.dim() - 1; k >= 0; --k) {
      y[k] = F.axis_norm(r % F.side());
      r /= F.side();
    }
    F[flat] = std::exp(-spec.t * spec.symbol.eval(y));
  }
  return F;
}

namespace {

void check_heat_spec(const HeatMeasureSpec& spec) {
  if (!(spec.t > 0.0)) throw std::invalid_argument("heat measure needs t > 0");
  auto e = spec.symbol.certify();
  if (!e.elliptic && !e.strictly_elliptic)
    throw NotElliptic("symbol is not elliptic (principal minimum " + std::to_string(e.min_principal) + ")");
  double loss = heat_mass_deficit(spec);
  if (loss > 1e-3)
    throw MassDeficit("support B(0,p^" + std::to_string(spec.M) + ") loses mass " + std::to_string(loss));
}

}  // namespace

GridFunction heat_measure(const HeatMeasureSpec& spec) {
  check_heat_spec(spec);
  return fourier(heat_multiplier(spec), true);
}

GridFunction heat_solve(const GridFunction& u0, const HeatMeasureSpec& spec) {
  check_heat_spec(spec);
  if (u0.prime() != spec.p || u0.dim() != spec.symbol.dim() || u0.support_exponent() != spec.M ||
      u0.resolution_exponent() != spec.N)
    throw std::invalid_argument("initial datum and heat spec use different grids");
  GridFunction F = fourier(u0);
  GridFunction H = heat_multiplier(spec);
  kernels::cmul(F.values().data(), H.values().data(), F.size());
  return fourier(F, true);
}

}  // namespace padic
