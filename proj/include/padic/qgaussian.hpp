#pragma once

#include "padic/grid_function.hpp"
#include "padic/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace padic {

struct DegenerateCovariance : std::domain_error {
  using std::domain_error::domain_error;
};

struct QGaussianSpec {
  unsigned p = 2;
  double q = 2.0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(1, 1);
  std::vector<PAdicNumber> gamma;  // empty means 0
  int M = 3;
  int N = 3;

  int dim() const { return static_cast<int>(B.rows()); }
  QGaussianSpec scaled(double t) const;  // B -> tB
};

// Symmetric, eigenvalues >= -1e-12; throws std::invalid_argument otherwise.
void validate(const QGaussianSpec& spec);
bool is_zero_covariance(const QGaussianSpec& spec);

// componentwise |z_k|^(q/2)
std::vector<double> v_q(const std::vector<PAdicNumber>& z, double q);
cplx char_functional(const QGaussianSpec& spec, const std::vector<PAdicNumber>& z);
// the characteristic functional sampled on the Fourier grid (levels N, M)
GridFunction char_grid(const QGaussianSpec& spec);
// requires B positive definite; throws DegenerateCovariance for the atomic case
GridFunction density(const QGaussianSpec& spec);

// Points of Q_p^d on a fixed lattice: coordinate k is a[k] p^-M, known to
// `digits` places (M + N coset digits plus refinement digits). Sums wrap mod
// p^digits, which is exact inside B(0, p^M).
struct Lattice {
  unsigned p = 2;
  int d = 1;
  int M = 0;
  int digits = 1;
  std::uint64_t modulus = 2;

  static Lattice for_levels(unsigned p, int d, int M, int N, int refine = 8);
  double norm(std::uint64_t a) const;  // |a p^-M|, 0 for a = 0
  double max_norm(const std::vector<std::uint64_t>& x) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % modulus; }
  PAdicNumber to_padic(std::uint64_t a) const;
  // chi(sum_k xi_k x_k) for xi_k = j[k] p^-N on the Fourier grid at levels (N, M)
  cplx character(const std::vector<std::uint64_t>& j, int N, const std::vector<std::uint64_t>& x) const;
};

using LatticePoint = std::vector<std::uint64_t>;

// Inverse-CDF sampler over the cosets of a realised density, refined
// uniformly inside the chosen coset.
class CosetSampler {
 public:
  CosetSampler(const GridFunction& dens, const Lattice& lattice);
  LatticePoint sample(Engine& rng) const;
  const Lattice& lattice() const { return lattice_; }
  double clipped_mass() const { return clipped_; }

 private:
  GridFunction shape_;
  Lattice lattice_;
  std::vector<double> cdf_;
  double clipped_ = 0.0;
};

// Draws from spec; B = 0 gives the point mass at gamma's finest coset.
std::vector<LatticePoint> sample(const QGaussianSpec& spec, std::size_t count, Engine& rng, int refine = 8);
cplx empirical_char(const Lattice& lattice, const std::vector<LatticePoint>& xs, const std::vector<std::uint64_t>& j,
                    int N);

// (n!)^-1 2^-n sum over S_2n of paired B entries, via pair partitions.
double moment_wick(const Eigen::MatrixXd& B, const std::vector<int>& indices);

struct TruncatedMoment {
  double value = 0.0;
  int L = 0;  // integration over B(0, p^L)
};
// int over B(0,p^L) of prod_i |x_{j_i}|^(q/2) against the realised density; gamma must be 0
TruncatedMoment moment_numeric(const QGaussianSpec& spec, const std::vector<int>& indices, int L);
// int over B(0,p^L) of |x_k|^s
TruncatedMoment absolute_moment(const QGaussianSpec& spec, int k, double s, int L);
// sum_k moment_numeric(spec, (k,k), L)
double trace_sum(const QGaussianSpec& spec, int L);

struct PathSample {
  std::vector<double> times;
  std::vector<LatticePoint> states;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// q-Wiener process with real time: increment over [u,t] has law mu_{q,(t-u)B,0}.
class WienerSampler {
 public:
  explicit WienerSampler(QGaussianSpec spec, int refine = 8);
  PathSample path(const std::vector<double>& times, std::uint64_t seed, std::uint64_t stream) const;
  LatticePoint increment(double dt, Engine& rng) const;
  const Lattice& lattice() const { return lattice_; }

 private:
  const CosetSampler& sampler_for(double dt) const;
  QGaussianSpec spec_;
  Lattice lattice_;
  mutable std::map<double, std::unique_ptr<CosetSampler>> cache_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

struct ItoRow {
  int partition = 0;      // number of steps
  int integrand = 0;      // index into the integrand list
  double integral = 0.0;  // int phi dt
  double mean = 0.0;      // MC mean of sum phi(t_j) |d xi_j|^q
  double se = 0.0;
  double ratio = 0.0;     // mean / integral
  double ratio_se = 0.0;
};
struct ItoReport {
  std::vector<ItoRow> rows;
  const ItoRow& at(int partition, int integrand) const;
};
// d = 1, gamma = 0. Every partition size must divide the largest one; paths
// are simulated at the finest partition and coarsened by summing increments.
ItoReport ito_check(const QGaussianSpec& spec, double a, double b, const std::vector<int>& partitions,
                    const std::vector<std::function<double(double)>>& phis,
                    const std::vector<double>& phi_integrals, std::size_t paths, std::uint64_t seed,
                    unsigned workers = 1);

struct ChebyshevReport {
  double frequency = 0.0;
  double se = 0.0;
  double bound = 0.0;  // Tr(AB)
  std::size_t samples = 0;
};
// frequency of {A(v_q(x), v_q(x)) >= 1} for x ~ spec, against Tr(AB)
ChebyshevReport chebyshev_check(const QGaussianSpec& spec, const Eigen::MatrixXd& A, std::size_t samples,
                                std::uint64_t seed);

}  // namespace padic
