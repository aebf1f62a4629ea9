#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mwdg/alpert.hpp"

namespace mwdg {

enum class InterpVariant { Inner, Interface };

InterpVariant parse_variant(const std::string& s);
std::string to_string(InterpVariant v);

// A point with a declared one-sided limit (side 0: no discontinuity expected).
struct InterpPoint {
  double x;
  int side;
};

class InterpBasis1D final : public Basis1D {
 public:
  InterpBasis1D(int M, InterpVariant variant);

  int M() const { return M_; }
  InterpVariant variant() const { return variant_; }
  int p() const override { return M_ + 1; }

  const std::vector<InterpPoint>& X0() const { return x0_; }
  const std::vector<InterpPoint>& X1tilde() const { return x1_; }
  // 0 for the left half of [0,1], 1 for the right half.
  int psi_half(int i) const { return half_[i]; }

  double eval_phi(int i, double x, int der = 0) const;
  double eval_psi(int i, double t, int side, int der = 0) const;
  // psi_i(2^{l-1} x - j); level 0 gives phi_i(x).
  double eval_interp_wavelet(int i, int l, int j, double x, int side) const;
  double eval(int idx, int i, double x, int side, int der) const override;

  // The i-th interpolation point owned by element idx.
  InterpPoint point(int idx, int i) const;

 private:
  int M_;
  InterpVariant variant_;
  std::vector<InterpPoint> x0_, x1_;
  std::vector<int> half_;
  std::vector<LagrangeFn> phi_, psi_;
};

InterpBasis1D make_interp_basis(int M, InterpVariant variant);

}  // namespace mwdg
