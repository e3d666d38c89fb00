#include "padic/grid_function.hpp"

#include "padic/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace padic {

namespace {

std::atomic<std::size_t> g_cap{std::size_t{1} << 24};

std::vector<std::size_t> digit_reversal(unsigned p, int K) {
  std::size_t n = upow(p, K);
  std::vector<std::size_t> rev(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t x = i, r = 0;
    for (int k = 0; k < K; ++k) {
      r = r * p + x % p;
      x /= p;
    }
    rev[i] = r;
  }
  return rev;
}

cplx unit_root(long long num, long long den, int sign) {
  long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(num) /
                    static_cast<long double>(den);
  return {static_cast<double>(std::cos(ang)), static_cast<double>(sign * std::sin(ang))};
}

}  // namespace

std::size_t grid_size_cap() { return g_cap.load(); }
void set_grid_size_cap(std::size_t cap) { g_cap.store(cap); }

std::uint64_t upow(unsigned p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / p) throw SizeOverflow("p^e overflows 64 bits");
    r *= p;
  }
  return r;
}

int uvaluation(std::uint64_t n, unsigned p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

GridFunction::GridFunction(unsigned p, int d, int M, int N) : p_(p), d_(d), M_(M), N_(N) {
  if (!is_prime(p)) throw std::invalid_argument("grid prime must be prime");
  if (d < 1) throw std::invalid_argument("grid dimension must be positive");
  if (M + N < 0) throw std::invalid_argument("support must contain at least one coset");
  side_ = upow(p, M + N);
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) {
    if (total > grid_size_cap() / side_)
      throw SizeOverflow("grid of " + std::to_string(p) + "^" + std::to_string(d * (M + N)) +
                         " cosets exceeds the configured cap");
    total *= side_;
  }
  if (total > grid_size_cap()) throw SizeOverflow("grid exceeds the configured cap");
  values_.assign(total, cplx(0.0, 0.0));
}

double GridFunction::cell_measure() const {
  return std::pow(static_cast<double>(p_), -static_cast<double>(d_) * N_);
}

std::vector<std::size_t> GridFunction::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(d_);
  for (int k = d_ - 1; k >= 0; --k) {
    idx[k] = flat % side_;
    flat /= side_;
  }
  return idx;
}

std::size_t GridFunction::flatten(const std::vector<std::size_t>& idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < d_; ++k) flat = flat * side_ + idx[k];
  return flat;
}

double GridFunction::axis_norm(std::size_t i) const {
  if (i == 0) return 0.0;
  return std::pow(static_cast<double>(p_), static_cast<double>(M_ - uvaluation(i, p_)));
}

double GridFunction::norm_at(std::size_t flat) const {
  double m = 0.0;
  for (int k = 0; k < d_; ++k) {
    m = std::max(m, axis_norm(flat % side_));
    flat /= side_;
  }
  return m;
}

PAdicNumber GridFunction::axis_point(std::size_t i) const {
  return PAdicNumber::from_bigint(p_, BigInt(i)).mul_p_power(-M_);
}

std::size_t GridFunction::axis_index(const PAdicNumber& x) const {
  if (x.prime() != p_) throw PrimeMismatch("point and grid use different primes");
  return static_cast<std::size_t>(x.coset_index(M_, M_ + N_));
}

bool GridFunction::same_shape(const GridFunction& o) const {
  return p_ == o.p_ && d_ == o.d_ && M_ == o.M_ && N_ == o.N_;
}

void dft_radix_p(cplx* a, unsigned p, int K, int sign) {
  std::size_t n = upow(p, K);
  if (n <= 1) return;
  auto rev = digit_reversal(p, K);
  for (std::size_t i = 0; i < n; ++i)
    if (rev[i] > i) std::swap(a[i], a[rev[i]]);

  std::vector<cplx> wp(p);
  for (unsigned m = 0; m < p; ++m) wp[m] = unit_root(m, p, sign);

  std::vector<cplx> out;
  std::vector<cplx> tw;
  for (std::size_t s = 1; s < n; s *= p) {
    std::size_t L = s * p;
    tw.assign((p - 1) * s, cplx(1.0, 0.0));
    for (unsigned m = 1; m < p; ++m)
      for (std::size_t r = 0; r < s; ++r)
        tw[(m - 1) * s + r] = unit_root(static_cast<long long>((m * r) % L), static_cast<long long>(L), sign);
    out.assign(L, cplx(0.0, 0.0));
    for (std::size_t b = 0; b < n; b += L) {
      cplx* blk = a + b;
      for (unsigned m = 1; m < p; ++m) kernels::cmul(blk + m * s, tw.data() + (m - 1) * s, s);
      std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
      for (unsigned k = 0; k < p; ++k)
        for (unsigned m = 0; m < p; ++m) kernels::caxpy(out.data() + k * s, wp[(m * k) % p], blk + m * s, s);
      std::copy(out.begin(), out.end(), blk);
    }
  }
}

GridFunction fourier(const GridFunction& f, bool inverse) {
  const unsigned p = f.prime();
  const int d = f.dim();
  const int K = f.support_exponent() + f.resolution_exponent();
  GridFunction g(p, d, f.resolution_exponent(), f.support_exponent());
  g.values() = f.values();
  const std::size_t side = f.side();
  const std::size_t total = f.size();
  std::vector<cplx> line(side);
  std::size_t stride = total;
  for (int axis = 0; axis < d; ++axis) {
    stride /= side;  // distance between consecutive entries along this axis
    std::size_t block = stride * side;
    for (std::size_t outer = 0; outer < total; outer += block)
      for (std::size_t inner = 0; inner < stride; ++inner) {
        cplx* base = g.values().data() + outer + inner;
        for (std::size_t i = 0; i < side; ++i) line[i] = base[i * stride];
        dft_radix_p(line.data(), p, K, inverse ? -1 : +1);
        for (std::size_t i = 0; i < side; ++i) base[i * stride] = line[i];
      }
  }
  kernels::rscale(g.values().data(), f.cell_measure(), total);
  return g;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  if (!f.same_shape(g)) throw std::invalid_argument("convolution needs operands on the same grid");
  GridFunction F = fourier(f);
  GridFunction G = fourier(g);
  kernels::cmul(F.values().data(), G.values().data(), F.size());
  return fourier(F, true);
}

GridFunction translate(const GridFunction& f, const std::vector<PAdicNumber>& a) {
  if (static_cast<int>(a.size()) != f.dim()) throw std::invalid_argument("shift dimension mismatch");
  std::vector<std::size_t> shift(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) shift[k] = f.axis_index(a[k]);
  GridFunction g(f.prime(), f.dim(), f.support_exponent(), f.resolution_exponent());
  const std::size_t side = f.side();
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    auto idx = f.unflatten(flat);
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = (idx[k] + shift[k]) % side;
    g[f.flatten(idx)] = f[flat];
  }
  return g;
}

cplx haar_integral(const GridFunction& f) {
  cplx acc(0.0, 0.0);
  for (const auto& v : f.values()) acc += v;
  return acc * f.cell_measure();
}

cplx haar_integral(const GridFunction& f, const Ball& region) {
  const int M = f.support_exponent();
  const int N = f.resolution_exponent();
  const int k = region.radius_exponent();
  if (k < -N) throw RegionFinerThanResolution("region radius is below the grid resolution");
  if (region.dimension() != f.dim()) throw std::invalid_argument("region dimension mismatch");
  const std::size_t side = f.side();
  // per-axis membership of coset representatives
  std::vector<std::vector<char>> inside(f.dim(), std::vector<char>(side, 0));
  for (int ax = 0; ax < f.dim(); ++ax) {
    const PAdicNumber& c = region.center()[ax];
    if (!c.is_zero() && c.valuation() < -M) {
      bool all = -c.valuation() <= k;
      std::fill(inside[ax].begin(), inside[ax].end(), static_cast<char>(all));
      continue;
    }
    std::size_t ci = f.axis_index(c);
    if (M - k <= 0) {
      std::fill(inside[ax].begin(), inside[ax].end(), 1);
      continue;
    }
    std::uint64_t mod = upow(f.prime(), M - k);
    for (std::size_t i = 0; i < side; ++i) inside[ax][i] = ((i + side - ci) % side) % mod == 0;
  }
  cplx acc(0.0, 0.0);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t r = flat;
    bool in = true;
    for (int ax = f.dim() - 1; ax >= 0 && in; --ax) {
      in = inside[ax][r % side];
      r /= side;
    }
    if (in) acc += f[flat];
  }
  return acc * f.cell_measure();
}

double l2_norm(const GridFunction& f) {
  return std::sqrt(kernels::norm2(f.values().data(), f.size()) * f.cell_measure());
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw std::invalid_argument("size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

void write_binary(std::ostream& os, const GridFunction& f) {
  os.write("PGF1", 4);
  std::uint32_t p = f.prime(), d = static_cast<std::uint32_t>(f.dim());
  std::int32_t M = f.support_exponent(), N = f.resolution_exponent();
  os.write(reinterpret_cast<const char*>(&p), 4);
  os.write(reinterpret_cast<const char*>(&d), 4);
  os.write(reinterpret_cast<const char*>(&M), 4);
  os.write(reinterpret_cast<const char*>(&N), 4);
  os.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}

GridFunction read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PGF1", 4) != 0) throw std::runtime_error("not a grid function stream");
  std::uint32_t p = 0, d = 0;
  std::int32_t M = 0, N = 0;
  is.read(reinterpret_cast<char*>(&p), 4);
  is.read(reinterpret_cast<char*>(&d), 4);
  is.read(reinterpret_cast<char*>(&M), 4);
  is.read(reinterpret_cast<char*>(&N), 4);
  GridFunction f(p, static_cast<int>(d), M, N);
  is.read(reinterpret_cast<char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("truncated grid function stream");
  return f;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "p,d,M,N\n" << f.prime() << ',' << f.dim() << ',' << f.support_exponent() << ','
     << f.resolution_exponent() << '\n';
  for (int k = 0; k < f.dim(); ++k) os << 'i' << k << ',';
  os << "re,im\n";
  char buf[64];
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    for (auto i : f.unflatten(flat)) os << i << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f[flat].real(), f[flat].imag());
    os << buf;
  }
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (line != "p,d,M,N") throw std::runtime_error("missing grid function CSV header");
  std::getline(is, line);
  unsigned p = 0;
  int d = 0, M = 0, N = 0;
  char c1, c2, c3;
  std::istringstream meta(line);
  if (!(meta >> p >> c1 >> d >> c2 >> M >> c3 >> N)) throw std::runtime_error("bad grid function metadata");
  GridFunction f(p, d, M, N);
  std::getline(is, line);  // column names
  std::vector<std::size_t> idx(d);
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    for (int k = 0; k < d; ++k) {
      std::getline(row, cell, ',');
      idx[k] = std::stoull(cell);
    }
    std::getline(row, cell, ',');
    double re = std::stod(cell);
    std::getline(row, cell, ',');
    double im = std::stod(cell);
    f[f.flatten(idx)] = cplx(re, im);
    ++rows;
  }
  if (rows != f.size()) throw std::runtime_error("grid function CSV has missing rows");
  return f;
}

}  // namespace padic
