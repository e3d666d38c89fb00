#pragma once

#include "padic/grid_function.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace padic {

struct NotElliptic : std::domain_error {
  using std::domain_error::domain_error;
};
struct MassDeficit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One coefficient b^k_{j1..jk}; k = index.size(), indices are 0-based axes.
struct SymbolTerm {
  std::vector<int> index;
  double b = 0.0;
};

// A = sum (-i)^k b^k_{j1..jk} d_{j1}...d_{jk}, each d_j the order-1 Vladimirov
// operator in x_j, with symbol  Atilde(y) = -sum (-i)^k b^k_{j1..jk} y_{j1}...y_{jk}.
class SymbolSpec {
 public:
  explicit SymbolSpec(int d = 1, std::vector<SymbolTerm> terms = {});
  SymbolSpec& add(std::vector<int> index, double b);

  int dim() const { return d_; }
  int order() const;
  const std::vector<SymbolTerm>& terms() const { return terms_; }

  cplx eval(const std::vector<double>& y) const;
  cplx eval_principal(const std::vector<double>& y) const;
  bool has_odd_terms() const;

  struct Ellipticity {
    double min_symbol = 0.0;     // min of Re Atilde(y) / min(1, |y|^ord) over the net
    double min_principal = 0.0;  // min of the top-order part on the unit sphere
    double max_imag = 0.0;
    bool strictly_elliptic = false;
    bool elliptic = false;
  };
  // Deterministic net: directions on the unit sphere times radii 2^-8 .. 2^8.
  Ellipticity certify(double threshold = 1e-9) const;

  // d = 1 shorthand for Atilde(y) = c y^2
  static SymbolSpec laplacian_1d(double c = 1.0);

 private:
  int d_;
  std::vector<SymbolTerm> terms_;
};

// F^-1(m(xi) F f), m evaluated at coset representatives of the Fourier grid
GridFunction apply_multiplier(const GridFunction& f, const std::function<cplx(const GridFunction&, std::size_t)>& m);

// F_j^-1(|xi_j|^u F_j f). At xi_j = 0 the multiplier is 1 for u = 0 and 0 otherwise.
GridFunction vladimirov_apply(const GridFunction& f, cplx u, int axis);

// sum over terms of composed order-1 operators with phase (-i)^k
GridFunction operator_apply(const SymbolSpec& A, const GridFunction& f);
// F^-1(-Atilde(|xi_1|, ..., |xi_d|) F f)
GridFunction operator_apply_multiplier(const SymbolSpec& A, const GridFunction& f);

struct HeatMeasureSpec {
  double t = 1.0;
  SymbolSpec symbol;
  unsigned p = 2;
  int M = 3;
  int N = 3;
};

// Mass of the heat measure lying outside B(0, p^M), relative to its total mass.
double heat_mass_deficit(const HeatMeasureSpec& spec);
// exp(-t Atilde(|xi|)) on the Fourier grid (levels N, M)
GridFunction heat_multiplier(const HeatMeasureSpec& spec);
// density of the heat measure realised on the (M, N) grid
GridFunction heat_measure(const HeatMeasureSpec& spec);
// u(t) = u0 * density, computed through the multiplier
GridFunction heat_solve(const GridFunction& u0, const HeatMeasureSpec& spec);

}  // namespace padic
