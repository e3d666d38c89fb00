#pragma once

#include "padic/series.hpp"

#include <stdexcept>
#include <vector>

namespace padic {

struct NoContraction : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One Mahler-basis series per coordinate.
using MahlerFunction = std::vector<Series>;
MahlerFunction antiderive(const MahlerFunction& f);
std::vector<PAdicNumber> eval(const MahlerFunction& f, const PAdicNumber& b);

// Gamma(x)(u, v)_k = sum_ij G[k][i][j](x) u_i v_j with G[k][i][j] = G[k][j][i].
class ChristoffelField {
 public:
  ChristoffelField() = default;
  ChristoffelField(unsigned p, int d, int precision = default_precision());
  static ChristoffelField zero(unsigned p, int d, int precision = default_precision());

  unsigned prime() const { return p_; }
  int dim() const { return d_; }
  int precision() const { return prec_; }
  // sets both (i, j) and (j, i)
  void set(int k, int i, int j, const Poly& g);
  const Poly& at(int k, int i, int j) const;
  bool is_zero() const;

  std::vector<PAdicNumber> apply(const std::vector<PAdicNumber>& x, const std::vector<PAdicNumber>& u,
                                 const std::vector<PAdicNumber>& v) const;
  std::vector<Series> apply(const std::vector<Series>& x, const std::vector<Series>& u,
                            const std::vector<Series>& v) const;
  // coefficient bound for sup |Gamma(x)| over |x| <= p^r
  double norm(int radius_exponent = 0) const;

 private:
  unsigned p_ = 2;
  int d_ = 1;
  int prec_ = 32;
  std::vector<Poly> g_;  // d^3 entries
};

struct GeodesicOptions {
  Basis basis = Basis::power;
  int cap = 0;              // coefficients kept; 0 means precision + 9
  int max_iterations = 200;
  int chart_radius = 0;     // Gamma is bounded on |x| <= p^chart_radius
  int max_rescale = 64;
  std::vector<Series> f0;   // initial iterate, empty means 0
};

// c(b) for b in p^k Z_p, stored as c(p^k b') in the variable b'.
struct GeodesicResult {
  unsigned p = 2;
  std::vector<PAdicNumber> x0, y0;
  std::vector<Series> c, cdot, f;  // in b'
  int domain_exponent = 0;          // k
  int iterations = 0;
  double certificate = 0.0;         // contraction constant of the rescaled problem
  double observed_ratio = 0.0;      // max ratio of successive Picard corrections
  double last_correction = 0.0;

  std::vector<PAdicNumber> at(const PAdicNumber& b) const;  // requires b in p^k Z_p
  std::vector<PAdicNumber> velocity(const PAdicNumber& b) const;  // dc/db, power basis
};

// Contraction constant of the Picard map for initial speed eps = |y0|.
double contraction_bound(double gamma_norm, double eps, unsigned p, Basis basis, int cap, int chart_radius);

GeodesicResult geodesic_solve(const ChristoffelField& gamma, const std::vector<PAdicNumber>& x0,
                              const std::vector<PAdicNumber>& y0, const GeodesicOptions& opt = {});
// c_S(1); throws NoContraction when S lies outside the certified radius
std::vector<PAdicNumber> exp_map(const ChristoffelField& gamma, const std::vector<PAdicNumber>& x0,
                                 const std::vector<PAdicNumber>& S, const GeodesicOptions& opt = {});

// max over coordinates of |c'' + Gamma(c)(c', c')| at the given b (power basis),
// or of the same with second and first forward differences (Mahler basis)
double geodesic_residual(const ChristoffelField& gamma, const GeodesicResult& g, const std::vector<PAdicNumber>& bs);

struct Chart {
  Ball ball;
  ChristoffelField gamma;
};

// One or two charts; transition maps chart 0 coordinates to chart 1 coordinates.
struct ChartAtlas {
  std::vector<Chart> charts;
  PolyMap transition;
  PolyMap inverse;
  double derivative_bound = 1.0;  // sup |phi'| over chart 0
};

Poly truncated(const Poly& f, int degree);
// phi(y) = y + alpha y^2 on Z_p with flat chart 0; chart 1 gets the pulled Gamma
ChartAtlas quadratic_atlas(const PAdicNumber& alpha, int degree_cap = 0);
// identity (or affine) transition with the same Gamma on both sides
ChartAtlas affine_atlas(const ChristoffelField& gamma, const Ball& ball, const std::vector<std::vector<PAdicNumber>>& A,
                        const std::vector<PAdicNumber>& shift);

struct CompatReport {
  double max_residual = 0.0;    // over sampled points and directions
  double round_trip = 0.0;      // max |psi(phi(y)) - y|
  double derivative_sup = 0.0;  // Gauss bound of phi' on chart 0
  int samples = 0;
};
// points: chart 0 coordinates in the overlap; directions drawn from `dirs`
CompatReport transition_compat_check(const ChartAtlas& atlas, const std::vector<std::vector<PAdicNumber>>& points,
                                     const std::vector<std::vector<PAdicNumber>>& dirs);
// phi(c0(b)) against c1(b) for the geodesic from (x0, y0) in chart 0
double geodesic_agreement(const ChartAtlas& atlas, const std::vector<PAdicNumber>& x0,
                          const std::vector<PAdicNumber>& y0, const std::vector<PAdicNumber>& bs,
                          const GeodesicOptions& opt = {});

}  // namespace padic
