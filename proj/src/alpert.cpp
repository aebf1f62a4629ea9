#include "mwdg/alpert.hpp"

#include <algorithm>
#include <cmath>

#include "mwdg/error.hpp"
#include "mwdg/grid.hpp"

namespace mwdg {

std::array<double, 2> element_support(int idx) {
  if (idx == 0) return {0.0, 1.0};
  const int l = level_of_index(idx), j = cell_of_index(idx);
  const double h = std::ldexp(1.0, 1 - l);
  return {j * h, (j + 1) * h};
}

namespace {

double inner(const HalfPoly& a, const HalfPoly& b) {
  const Quadrature1D q = gauss_legendre(12);
  double s = 0;
  for (int n = 0; n < q.size(); ++n) {
    const double xl = 0.5 * q.nodes[n], xr = 0.5 + 0.5 * q.nodes[n];
    s += 0.5 * q.weights[n] * (a.left(xl) * b.left(xl) + a.right(xr) * b.right(xr));
  }
  return s;
}

HalfPoly axpy(double s, const HalfPoly& x, const HalfPoly& y) {
  return HalfPoly{s * x.left + y.left, s * x.right + y.right};
}

}  // namespace

std::vector<HalfPoly> construct_mother_wavelets(int k) {
  require(k >= 0 && k <= 6, ErrorCode::InvalidArgument, "Alpert degree must be 0..6");
  std::vector<HalfPoly> scal;
  for (int i = 0; i <= k; ++i) {
    const Poly s = shifted_legendre(i);
    scal.push_back({s, s});
  }
  const Poly y{{-1.0, 2.0}};
  std::vector<HalfPoly> w;
  for (int i = 0; i <= k; ++i) {
    Poly yi{{1.0}};
    for (int n = 0; n < i; ++n) yi = yi * y;
    HalfPoly f{-1.0 * yi, yi};
    for (int pass = 0; pass < 2; ++pass) {
      for (const HalfPoly& s : scal) f = axpy(-inner(f, s), s, f);
      for (const HalfPoly& g : w) f = axpy(-inner(f, g), g, f);
    }
    const double nrm = std::sqrt(inner(f, f));
    require(nrm > 1e-8, ErrorCode::Internal, "mother wavelet Gram matrix is singular");
    f = axpy(1.0 / nrm - 1.0, f, f);
    w.push_back(f);
  }
  for (HalfPoly& f : w) {
    for (auto it = f.right.c.rbegin(); it != f.right.c.rend(); ++it) {
      if (std::abs(*it) > 1e-10) {
        if (*it < 0) f = HalfPoly{-1.0 * f.left, -1.0 * f.right};
        break;
      }
    }
  }
  return w;
}

AlpertBasis1D::AlpertBasis1D(int k) : k_(k) {
  require(k >= 0 && k <= 6, ErrorCode::InvalidArgument, "Alpert degree must be 0..6");
  for (int i = 0; i <= k; ++i) {
    scaling_.push_back(shifted_legendre(i));
    scaling_d_.push_back(scaling_.back().derivative());
  }
  wavelets_ = construct_mother_wavelets(k);
  for (const HalfPoly& f : wavelets_) wavelets_d_.push_back({f.left.derivative(), f.right.derivative()});
}

double AlpertBasis1D::eval_scaling(int i, double x, int der) const {
  require(i >= 0 && i <= k_, ErrorCode::InvalidArgument, "scaling index out of range");
  return der == 0 ? scaling_[i](x) : scaling_d_[i](x);
}

double AlpertBasis1D::eval_mother(int i, double t, int side, int der) const {
  require(i >= 0 && i <= k_, ErrorCode::InvalidArgument, "wavelet index out of range");
  const bool left = t < 0.5 || (t == 0.5 && resolve_side(t, side) < 0);
  const HalfPoly& f = der == 0 ? wavelets_[i] : wavelets_d_[i];
  return left ? f.left(t) : f.right(t);
}

double AlpertBasis1D::eval_wavelet(int i, int l, int j, double x, int side, int der) const {
  require(l >= 1 && j >= 0 && j < cells_at_level(l), ErrorCode::InvalidArgument, "invalid wavelet level/cell");
  return eval(index_of(l, j), i, x, side, der);
}

double AlpertBasis1D::eval(int idx, int i, double x, int side, int der) const {
  const int s = resolve_side(x, side);
  if (idx == 0) {
    if (x < 0 || x > 1 || (x == 0 && s < 0) || (x == 1 && s > 0)) return 0.0;
    return eval_scaling(i, x, der);
  }
  const int l = level_of_index(idx), j = cell_of_index(idx);
  const double scale = std::ldexp(1.0, l - 1);
  const double t = scale * x - j;
  if (t < 0 || t > 1 || (t == 0 && s < 0) || (t == 1 && s > 0)) return 0.0;
  double v = std::sqrt(scale) * eval_mother(i, t, s, der);
  if (der == 1) v *= scale;
  return v;
}

std::vector<double> project_1d(const Fn1D& f, const AlpertBasis1D& basis, int N, int quad_points) {
  const int p = basis.p();
  const int nq = quad_points > 0 ? quad_points : std::max(8, basis.k() + 4);
  const Quadrature1D q = gauss_legendre(nq);
  const int cells = 1 << N;
  const double h = std::ldexp(1.0, -N);
  std::vector<double> out(static_cast<std::size_t>(cells) * p, 0.0);
  std::vector<int> chain;
  for (int c = 0; c < cells; ++c) {
    chain.assign(1, 0);
    for (int l = 1; l <= N; ++l) chain.push_back(index_of(l, c >> (N - l + 1)));
    for (int n = 0; n < nq; ++n) {
      const double x = (c + q.nodes[n]) * h;
      const double fw = f(x) * q.weights[n] * h;
      for (int idx : chain)
        for (int i = 0; i < p; ++i) out[idx * p + i] += fw * basis.eval(idx, i, x, 0, 0);
    }
  }
  return out;
}

}  // namespace mwdg
