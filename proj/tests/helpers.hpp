#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mwdg/fastmv.hpp"
#include "mwdg/grid.hpp"
#include "mwdg/quadrature.hpp"

namespace testing {

using mwdg::Coeffs;

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// y_out = sum over terms of scale * kron(A_1, ..., A_d) restricted to the given key sets.
struct DenseTerm {
  std::vector<Eigen::MatrixXd> factor;
  double scale = 1.0;
};

inline Coeffs dense_apply(const std::vector<DenseTerm>& terms, int d, const std::vector<int>& p_in,
                          const std::vector<int>& p_out, const mwdg::IndexSet& in, const Coeffs& x,
                          const mwdg::IndexSet& out) {
  int bi = 1, bo = 1;
  for (int m = 0; m < d; ++m) {
    bi *= p_in[m];
    bo *= p_out[m];
  }
  Coeffs y(out.size() * bo, 0.0);
  for (const auto& t : terms)
    for (std::size_t eo = 0; eo < out.size(); ++eo)
      for (std::size_t ei = 0; ei < in.size(); ++ei) {
        for (int a = 0; a < bo; ++a)
          for (int b = 0; b < bi; ++b) {
            double v = t.scale;
            int ra = a, rb = b;
            for (int m = d - 1; m >= 0 && v != 0.0; --m) {
              const int ia = ra % p_out[m], ib = rb % p_in[m];
              ra /= p_out[m];
              rb /= p_in[m];
              v *= t.factor[m](mwdg::key_index(out[eo], m) * p_out[m] + ia, mwdg::key_index(in[ei], m) * p_in[m] + ib);
            }
            y[eo * bo + a] += v * x[ei * bi + b];
          }
      }
  return y;
}

// Value of sum_e sum_a c[e,a] prod_m basis(idx_m, a_m)(x_m).
template <class Basis>
double eval_expansion(const Coeffs& c, const mwdg::IndexSet& keys, int d, const Basis& basis, const double* x,
                      const int* sides = nullptr, int der_dim = -1) {
  const int p = basis.p();
  int bs = 1;
  for (int m = 0; m < d; ++m) bs *= p;
  double s = 0;
  for (std::size_t e = 0; e < keys.size(); ++e) {
    double vals[mwdg::kMaxDim][8];
    bool zero = false;
    for (int m = 0; m < d && !zero; ++m) {
      bool any = false;
      for (int i = 0; i < p; ++i) {
        vals[m][i] = basis.eval(mwdg::key_index(keys[e], m), i, x[m], sides ? sides[m] : 0, m == der_dim ? 1 : 0);
        any = any || vals[m][i] != 0.0;
      }
      zero = !any;
    }
    if (zero) continue;
    for (int a = 0; a < bs; ++a) {
      double v = c[e * bs + a];
      int r = a;
      for (int m = d - 1; m >= 0; --m) {
        v *= vals[m][r % p];
        r /= p;
      }
      s += v;
    }
  }
  return s;
}

// Gauss points and weights on each of the 2^N finest cells.
inline void finest_rule(int N, int n, std::vector<double>& x, std::vector<double>& w) {
  const mwdg::Quadrature1D q = mwdg::gauss_legendre(n);
  const double h = std::ldexp(1.0, -N);
  x.clear();
  w.clear();
  for (int c = 0; c < (1 << N); ++c)
    for (int i = 0; i < q.size(); ++i) {
      x.push_back(h * (c + q.nodes[i]));
      w.push_back(h * q.weights[i]);
    }
}

// Random downward-closed subset of the given grid keys.
inline mwdg::AdaptiveGrid random_pruning(const mwdg::AdaptiveGrid& g, std::mt19937_64& rng, double keep = 0.6) {
  std::uniform_real_distribution<double> u(0, 1);
  mwdg::AdaptiveGrid out(g.d(), g.k(), g.M(), g.N_max());
  for (mwdg::PackedKey key : g.keys())
    if (u(rng) < keep) out.insert_closed(key);
  out.canonicalize();
  return out;
}

}  // namespace testing
