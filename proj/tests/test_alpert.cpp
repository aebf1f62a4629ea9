#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "mwdg/alpert.hpp"
#include "mwdg/ipdg.hpp"

using namespace mwdg;

namespace {

// Gram matrix of every basis function up to level N, by Gauss quadrature on the finest cells.
Eigen::MatrixXd gram(const AlpertBasis1D& b, int N, int n_quad) {
  std::vector<double> x, w;
  testing::finest_rule(N, n_quad, x, w);
  const int p = b.p(), n = (1 << N) * p;
  Eigen::MatrixXd V(x.size(), n);
  for (std::size_t q = 0; q < x.size(); ++q)
    for (int idx = 0; idx < (1 << N); ++idx)
      for (int i = 0; i < p; ++i) V(q, idx * p + i) = b.eval(idx, i, x[q], 0, 0);
  Eigen::VectorXd W = Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
  return V.transpose() * W.asDiagonal() * V;
}

double l2_error_1d(const Fn1D& f, const std::vector<double>& c, const AlpertBasis1D& b, int N) {
  std::vector<double> x, w;
  testing::finest_rule(N + 1, 10, x, w);
  double s = 0;
  for (std::size_t q = 0; q < x.size(); ++q) {
    double v = 0;
    for (int idx = 0; idx < (1 << N); ++idx)
      for (int i = 0; i < b.p(); ++i) v += c[idx * b.p() + i] * b.eval(idx, i, x[q], 0, 0);
    s += w[q] * (v - f(x[q])) * (v - f(x[q]));
  }
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("alpert") {
  TEST_CASE("orthonormality and vanishing moments of mother wavelets") {
    for (int k = 0; k <= 4; ++k) {
      const AlpertBasis1D b(k);
      const Quadrature1D q = gauss_legendre(20);
      for (int i = 0; i <= k; ++i) {
        for (int m = 0; m <= k; ++m) {
          double mom = 0;
          for (int n = 0; n < q.size(); ++n) {
            const double xl = 0.5 * q.nodes[n], xr = 0.5 + xl;
            mom += 0.5 * q.weights[n] *
                   (std::pow(xl, m) * b.eval_mother(i, xl, 0) + std::pow(xr, m) * b.eval_mother(i, xr, 0));
          }
          CHECK(std::abs(mom) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("orthonormal to level 4") {
    for (int k = 0; k <= 3; ++k) {
      const Eigen::MatrixXd G = gram(AlpertBasis1D(k), 4, 2 * (k + 1));
      CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-11);
    }
  }

  TEST_CASE("scaling function examples") {
    const AlpertBasis1D b(3);
    for (double x : {0.0, 0.3, 0.77, 1.0}) CHECK(b.eval_scaling(0, x) == doctest::Approx(1.0));
    CHECK(std::abs(b.eval_scaling(1, 0.5)) < 1e-14);
    const Quadrature1D q = gauss_legendre(20);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        double s = 0;
        for (int n = 0; n < q.size(); ++n) s += q.weights[n] * b.eval_scaling(i, q.nodes[n]) * b.eval_scaling(j, q.nodes[n]);
        CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
  }

  TEST_CASE("wavelet support, norm and orthogonality to scaling functions") {
    const AlpertBasis1D b(2);
    CHECK(b.eval_wavelet(0, 3, 1, 0.1) == 0.0);
    CHECK(b.eval_wavelet(1, 3, 1, 0.9) == 0.0);
    CHECK(b.eval_wavelet(2, 2, 0, 0.75) == 0.0);
    std::vector<double> x, w;
    testing::finest_rule(5, 6, x, w);
    for (int l = 1; l <= 4; ++l)
      for (int j = 0; j < cells_at_level(l); ++j)
        for (int i = 0; i <= 2; ++i) {
          double s = 0, o = 0;
          for (std::size_t q = 0; q < x.size(); ++q) {
            const double v = b.eval_wavelet(i, l, j, x[q]);
            s += w[q] * v * v;
            if (l == 2) o += w[q] * v * b.eval_scaling(i, x[q]);
          }
          CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
          CHECK(std::abs(o) < 1e-12);
        }
  }

  TEST_CASE("mother wavelets span the orthogonal complement") {
    for (int k = 1; k <= 3; ++k) {
      const auto w = construct_mother_wavelets(k);
      CHECK(static_cast<int>(w.size()) == k + 1);
      const Quadrature1D q = gauss_legendre(20);
      Eigen::MatrixXd G(k + 1, k + 1);
      for (int a = 0; a <= k; ++a)
        for (int c = 0; c <= k; ++c) {
          double s = 0;
          for (int n = 0; n < q.size(); ++n) {
            const double xl = 0.5 * q.nodes[n], xr = 0.5 + xl;
            s += 0.5 * q.weights[n] * (w[a].left(xl) * w[c].left(xl) + w[a].right(xr) * w[c].right(xr));
          }
          G(a, c) = s;
        }
      CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(G).rank() == k + 1);
    }
    const AlpertBasis1D b1(1);
    const Quadrature1D q = gauss_legendre(10);
    for (int i = 0; i <= 1; ++i) {
      double m0 = 0, m1 = 0;
      for (int n = 0; n < q.size(); ++n) {
        const double xl = 0.5 * q.nodes[n], xr = 0.5 + xl;
        const double fl = b1.eval_mother(i, xl, 0), fr = b1.eval_mother(i, xr, 0);
        m0 += 0.5 * q.weights[n] * (fl + fr);
        m1 += 0.5 * q.weights[n] * (xl * fl + xr * fr);
      }
      CHECK(std::abs(m0) < 1e-13);
      CHECK(std::abs(m1) < 1e-13);
    }
  }

  TEST_CASE("sign convention: leading right-half coefficient positive") {
    for (int k = 0; k <= 3; ++k)
      for (const auto& f : construct_mother_wavelets(k)) {
        double lead = 0;
        for (auto it = f.right.c.rbegin(); it != f.right.c.rend(); ++it)
          if (std::abs(*it) > 1e-10) {
            lead = *it;
            break;
          }
        CHECK(lead > 0);
      }
  }

  TEST_CASE("projection examples") {
    const AlpertBasis1D b(2);
    const auto c = project_1d([](double) { return 1.0; }, b, 4);
    CHECK(c[0] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-13);

    const auto e = project_1d([&](double x) { return b.eval_wavelet(0, 2, 1, x); }, b, 4);
    const std::size_t target = index_of(2, 1) * 3;
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(e[i] - (i == target ? 1.0 : 0.0)) < 1e-12);
  }

  TEST_CASE("projection error ratio for sin(2 pi x), k=2") {
    const AlpertBasis1D b(2);
    const Fn1D f = [](double x) { return std::sin(2 * std::numbers::pi * x); };
    const double e5 = l2_error_1d(f, project_1d(f, b, 5), b, 5);
    const double e6 = l2_error_1d(f, project_1d(f, b, 6), b, 6);
    CHECK(e5 / e6 == doctest::Approx(8.0).epsilon(0.15));
  }

  TEST_CASE("projection is an L2 contraction") {
    const AlpertBasis1D b(1);
    const Fn1D f = [](double x) { return std::exp(3 * x) * std::cos(7 * x); };
    const auto c = project_1d(f, b, 4);
    std::vector<double> x, w;
    testing::finest_rule(4, 12, x, w);
    double nf = 0;
    for (std::size_t q = 0; q < x.size(); ++q) nf += w[q] * f(x[q]) * f(x[q]);
    CHECK(testing::norm2(c) <= std::sqrt(nf) + 1e-10);
  }

  TEST_CASE("projection is nested across levels") {
    const AlpertBasis1D b(3);
    const Fn1D f = [](double x) { return std::exp(-10 * (x - 0.4) * (x - 0.4)); };
    const auto c4 = project_1d(f, b, 4), c5 = project_1d(f, b, 5);
    for (std::size_t i = 0; i < c4.size(); ++i) CHECK(std::abs(c4[i] - c5[i]) < 1e-12);
  }

  TEST_CASE("separable projection") {
    const AlpertBasis1D b(1);
    const AdaptiveGrid g = build_sparse_grid(2, 1, 3);
    std::vector<Fn1D> ones(2, [](double) { return 1.0; });
    const Coeffs c = project_separable(ones, g, b);
    CHECK(c[0] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-13);

    // Full 2D quadrature oracle.
    const AdaptiveGrid full = build_full_grid(2, 1, 3);
    const Fn1D f0 = [](double x) { return std::sin(3 * x); }, f1 = [](double y) { return std::exp(y); };
    const Coeffs p = project_separable(std::vector<Fn1D>{f0, f1}, full, b);
    std::vector<double> x, w;
    testing::finest_rule(3, 6, x, w);
    Coeffs oracle(full.dof(), 0.0);
    for (std::size_t e = 0; e < full.size(); ++e)
      for (int a = 0; a < 4; ++a) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
          for (std::size_t j = 0; j < x.size(); ++j)
            s += w[i] * w[j] * f0(x[i]) * f1(x[j]) * b.eval(key_index(full.keys()[e], 0), a / 2, x[i], 0, 0) *
                 b.eval(key_index(full.keys()[e], 1), a % 2, x[j], 0, 0);
        oracle[e * 4 + a] = s;
      }
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - oracle[i]) < 1e-10);

    SeparableSum sum(2);
    sum[0].factor = {f0, f1, nullptr};
    sum[1].factor = {f1, f0, nullptr};
    sum[1].time = [](double t) { return 2 * t; };
    const Coeffs lin = project_separable(sum, 1.5, full, b);
    const Coeffs q2 = project_separable(std::vector<Fn1D>{f1, f0}, full, b);
    for (std::size_t i = 0; i < lin.size(); ++i) CHECK(lin[i] == doctest::Approx(p[i] + 3 * q2[i]));
  }
}
