#include "mwdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <boost/math/special_functions/legendre.hpp>

#include "mwdg/error.hpp"

namespace mwdg {

Quadrature1D gauss_legendre(int n) {
  require(n >= 1 && n <= 64, ErrorCode::InvalidArgument, "quadrature size must be 1..64");
  static std::mutex mu;
  static std::map<int, Quadrature1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // Boost returns the nonnegative zeros in ascending order.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it > 0) x.push_back(-*it);
  for (double z : half) x.push_back(z);

  Quadrature1D q;
  for (double z : x) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    q.nodes.push_back(0.5 * (z + 1.0));
    q.weights.push_back(0.5 * w);
  }
  cache.emplace(n, q);
  return q;
}

double Poly::operator()(double x) const {
  double v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Poly Poly::derivative() const {
  Poly d;
  for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(static_cast<double>(i) * c[i]);
  if (d.c.empty()) d.c.push_back(0.0);
  return d;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly operator*(double s, const Poly& a) {
  Poly r = a;
  for (double& v : r.c) v *= s;
  return r;
}

Poly lagrange(const std::vector<double>& nodes, int i) {
  Poly p{{1.0}};
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    const double den = nodes[i] - nodes[j];
    require(den != 0.0, ErrorCode::InvalidArgument, "repeated Lagrange node");
    p = p * Poly{{-nodes[j] / den, 1.0 / den}};
  }
  return p;
}

LagrangeFn::LagrangeFn(std::vector<double> n, int i) : nodes(std::move(n)), self(i) {
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (static_cast<int>(j) == self) continue;
    const double den = nodes[self] - nodes[j];
    require(den != 0.0, ErrorCode::InvalidArgument, "repeated Lagrange node");
    scale /= den;
  }
}

double LagrangeFn::operator()(double x) const {
  double v = scale;
  for (std::size_t j = 0; j < nodes.size(); ++j)
    if (static_cast<int>(j) != self) v *= x - nodes[j];
  return v;
}

double LagrangeFn::derivative(double x) const {
  double s = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (static_cast<int>(j) == self) continue;
    double v = 1;
    for (std::size_t m = 0; m < nodes.size(); ++m)
      if (m != j && static_cast<int>(m) != self) v *= x - nodes[m];
    s += v;
  }
  return scale * s;
}

Poly shifted_legendre(int i) {
  // Bonnet recursion in y = 2x - 1.
  const Poly y{{-1.0, 2.0}};
  Poly p0{{1.0}}, p1 = y;
  Poly p = i == 0 ? p0 : p1;
  for (int n = 1; n < i; ++n) {
    p = (static_cast<double>(2 * n + 1) / (n + 1)) * (y * p1) + (-static_cast<double>(n) / (n + 1)) * p0;
    p0 = p1;
    p1 = p;
  }
  return std::sqrt(2.0 * i + 1.0) * p;
}

}  // namespace mwdg
