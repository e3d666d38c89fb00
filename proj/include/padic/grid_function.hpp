#pragma once

#include "padic/padic_number.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace padic {

using cplx = std::complex<double>;

struct SizeOverflow : std::length_error {
  using std::length_error::length_error;
};
struct RegionFinerThanResolution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Largest number of cosets a GridFunction may hold.
std::size_t grid_size_cap();
void set_grid_size_cap(std::size_t cap);

std::uint64_t upow(unsigned p, int e);  // throws SizeOverflow past 2^63
int uvaluation(std::uint64_t n, unsigned p);  // n != 0

// A function on Q_p^d supported in B(0, p^M) (max norm) and constant on cosets
// of p^N Z_p^d. Along each axis, index i stands for the coset of x = i p^-M,
// so the little-endian base-p digits of i are the p-adic digits a_{-M}, ...,
// a_{N-1} of x. Values are stored row-major, axis 0 slowest.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(unsigned p, int d, int M, int N);

  unsigned prime() const { return p_; }
  int dim() const { return d_; }
  int support_exponent() const { return M_; }
  int resolution_exponent() const { return N_; }
  std::size_t side() const { return side_; }
  std::size_t size() const { return values_.size(); }
  // Haar measure of one coset, p^(-dN)
  double cell_measure() const;

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<std::size_t>& idx) const;

  // |x| for the representative i p^-M along one axis (0 for i = 0)
  double axis_norm(std::size_t i) const;
  // max-norm of the representative of a flat index
  double norm_at(std::size_t flat) const;
  // representative of axis index i as an exact p-adic number
  PAdicNumber axis_point(std::size_t i) const;
  // axis index of the coset containing x; x must lie in B(0, p^M)
  std::size_t axis_index(const PAdicNumber& x) const;

  bool same_shape(const GridFunction& o) const;

 private:
  unsigned p_ = 2;
  int d_ = 1;
  int M_ = 0;
  int N_ = 0;
  std::size_t side_ = 1;
  std::vector<cplx> values_;
};

cplx haar_integral(const GridFunction& f);
// integral over the ball B(center, p^k); k must be >= -N
cplx haar_integral(const GridFunction& f, const Ball& region);

// fhat(xi) = int f(x) chi(x xi) dx (inverse: chi(-x xi)); levels swap (M, N) -> (N, M)
GridFunction fourier(const GridFunction& f, bool inverse = false);
// (f * g)(x) = int f(y) g(x - y) dy; both operands on the same grid
GridFunction convolve(const GridFunction& f, const GridFunction& g);
// f(x - a) for a grid point a (one p-adic number per axis)
GridFunction translate(const GridFunction& f, const std::vector<PAdicNumber>& a);

double l2_norm(const GridFunction& f);  // Haar-weighted
double max_abs_diff(const GridFunction& f, const GridFunction& g);

// Binary layout: "PGF1", u32 p, u32 d, i32 M, i32 N, then re/im doubles (little-endian host order).
void write_binary(std::ostream& os, const GridFunction& f);
GridFunction read_binary(std::istream& is);
// CSV: "p,d,M,N" header, one metadata row, then "i0..i{d-1},re,im" rows.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is);

// In-place radix-p DFT of length p^K: a[j] <- sum_i a[i] exp(sign 2 pi i ij / p^K).
void dft_radix_p(cplx* a, unsigned p, int K, int sign);

}  // namespace padic
