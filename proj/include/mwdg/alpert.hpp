#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mwdg/quadrature.hpp"

namespace mwdg {

using Fn1D = std::function<double(double)>;

// Side argument for point evaluation: -1 left limit, +1 right limit, 0 the
// right limit except at x = 1.
inline int resolve_side(double x, int side) { return side != 0 ? side : (x >= 1.0 ? -1 : 1); }

// Support cell [lo, hi] of the hierarchical 1D element with index idx.
std::array<double, 2> element_support(int idx);

// A hierarchical family of piecewise polynomials on [0,1], p functions per element.
class Basis1D {
 public:
  virtual ~Basis1D() = default;
  virtual int p() const = 0;
  // Value (der = 0) or derivative (der = 1) of function i of element idx.
  virtual double eval(int idx, int i, double x, int side, int der) const = 0;
};

// Piecewise polynomial on the two halves of [0,1].
struct HalfPoly {
  Poly left, right;
};

class AlpertBasis1D final : public Basis1D {
 public:
  explicit AlpertBasis1D(int k);

  int k() const { return k_; }
  int p() const override { return k_ + 1; }

  double eval_scaling(int i, double x, int der = 0) const;
  // Mother wavelet on [0,1].
  double eval_mother(int i, double x, int side, int der = 0) const;
  // 2^{(l-1)/2} psi_i(2^{l-1} x - j) on its support, 0 elsewhere.
  double eval_wavelet(int i, int l, int j, double x, int side = 0, int der = 0) const;
  double eval(int idx, int i, double x, int side, int der) const override;

  const std::vector<Poly>& scaling() const { return scaling_; }
  const std::vector<HalfPoly>& wavelets() const { return wavelets_; }

 private:
  int k_;
  std::vector<Poly> scaling_, scaling_d_;
  std::vector<HalfPoly> wavelets_, wavelets_d_;
};

std::vector<HalfPoly> construct_mother_wavelets(int k);

// Hierarchical L2 projection onto V_N^k: coefficient (idx, i) at idx * (k+1) + i.
std::vector<double> project_1d(const Fn1D& f, const AlpertBasis1D& basis, int N, int quad_points = -1);

}  // namespace mwdg
