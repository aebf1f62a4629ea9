#pragma once

#include <vector>

namespace mwdg {

// Gauss-Legendre rule mapped to [0,1].
struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

Quadrature1D gauss_legendre(int n);

// Dense polynomial in monomial form, c[i] x^i.
struct Poly {
  std::vector<double> c;

  double operator()(double x) const;
  Poly derivative() const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(double s, const Poly& a);

// Lagrange polynomial through nodes, equal to 1 at nodes[i].
Poly lagrange(const std::vector<double>& nodes, int i);

// Lagrange polynomial evaluated in product form, exact at its nodes.
struct LagrangeFn {
  std::vector<double> nodes;
  int self = 0;
  double scale = 1.0;  // 1 / prod (x_self - x_j)

  LagrangeFn() = default;
  LagrangeFn(std::vector<double> nodes, int self);
  double operator()(double x) const;
  double derivative(double x) const;
};

// Orthonormal shifted Legendre polynomial sqrt(2i+1) P_i(2x-1).
Poly shifted_legendre(int i);

}  // namespace mwdg
