#include <cmath>

#include <boost/math/special_functions/legendre.hpp>
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "helpers.hpp"
#include "mwdg/operators1d.hpp"

using namespace mwdg;

namespace {

// Orthonormal Legendre function i on finest cell c (value or derivative).
double local(int N, int c, int i, double x, int der) {
  const double s = std::ldexp(1.0, N), t = 2 * (s * x - c) - 1;
  const double nrm = std::sqrt((2.0 * i + 1) * s);
  return der == 0 ? nrm * boost::math::legendre_p(i, t) : nrm * 2 * s * boost::math::legendre_p_prime(i, t);
}

// Rows: hierarchical functions; columns: finest-cell Legendre functions.
Eigen::MatrixXd basis_change(const Basis1D& b, int N, int k) {
  const int n = 1 << N, p = b.p(), q = k + 1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n * p, n * q);
  const Quadrature1D g = gauss_legendre(p + q + 2);
  const double h = std::ldexp(1.0, -N);
  for (int idx = 0; idx < n; ++idx)
    for (int i = 0; i < p; ++i)
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < q; ++a) {
          double s = 0;
          for (int t = 0; t < g.size(); ++t) {
            const double x = h * (c + g.nodes[t]);
            s += h * g.weights[t] * b.eval(idx, i, x, 0, 0) * local(N, c, a, x, 0);
          }
          Q(idx * p + i, c * q + a) = s;
        }
  return Q;
}

// Symmetric interior penalty matrix assembled cell by cell on the finest mesh.
Eigen::MatrixXd fine_ipdg(int N, int k, double sigma_over_h, Boundary1D bc) {
  const int n = 1 << N, q = k + 1;
  const double h = std::ldexp(1.0, -N);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n * q, n * q);
  const Quadrature1D g = gauss_legendre(q + 2);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        double s = 0;
        for (int t = 0; t < g.size(); ++t) {
          const double x = h * (c + g.nodes[t]);
          s += h * g.weights[t] * local(N, c, a, x, 1) * local(N, c, b, x, 1);
        }
        S(c * q + a, c * q + b) += s;
      }
  // Face with left cell cl (values at xl) and right cell cr (values at xr); -1 for a missing side.
  auto face = [&](int cl, double xl, int cr, double xr) {
    const bool boundary = cl < 0 || cr < 0;
    const double w = boundary ? 1.0 : 0.5;
    struct Tr {
      int dof;
      double jump, avg_der;
    };
    std::vector<Tr> tr;
    for (int a = 0; a < q; ++a) {
      if (cl >= 0) tr.push_back({cl * q + a, local(N, cl, a, xl, 0), w * local(N, cl, a, xl, 1)});
      if (cr >= 0) tr.push_back({cr * q + a, -local(N, cr, a, xr, 0), w * local(N, cr, a, xr, 1)});
    }
    for (const auto& v : tr)
      for (const auto& u : tr)
        S(v.dof, u.dof) += -v.jump * u.avg_der - v.avg_der * u.jump + sigma_over_h * v.jump * u.jump;
  };
  for (int c = 1; c < n; ++c) face(c - 1, c * h, c, c * h);
  if (bc.low == BoundaryType::Periodic) {
    face(n - 1, 1.0, 0, 0.0);
  } else {
    if (bc.low == BoundaryType::Dirichlet) face(-1, 0, 0, 0.0);
    if (bc.high == BoundaryType::Dirichlet) face(n - 1, 1.0, -1, 0);
  }
  return S;
}

double max_abs(const Eigen::MatrixXd& A) { return A.cwiseAbs().maxCoeff(); }

void check_triangularity(const Operator1D& op) {
  const Eigen::MatrixXd A = op.dense();
  const int n = op.n();
  for (int o = 0; o < n; ++o)
    for (int i = 0; i < n; ++i) {
      const int lo = level_of_index(o), li = level_of_index(i);
      const double v =
          A.block(o * op.p_out(), i * op.p_in(), op.p_out(), op.p_in()).cwiseAbs().maxCoeff();
      switch (op.triangularity()) {
        case Triangularity::Lower: CHECK((lo >= li || v < 1e-13)); break;
        case Triangularity::StrictlyLower: CHECK((lo > li || v < 1e-13)); break;
        case Triangularity::Upper: CHECK((lo <= li || v < 1e-13)); break;
        case Triangularity::StrictlyUpper: CHECK((lo < li || v < 1e-13)); break;
        case Triangularity::General: break;
      }
    }
}

const Boundary1D kPeriodic{BoundaryType::Periodic, BoundaryType::Periodic};
const Boundary1D kDirichlet{BoundaryType::Dirichlet, BoundaryType::Dirichlet};
const Boundary1D kNeumann{BoundaryType::Neumann, BoundaryType::Neumann};
const Boundary1D kMixed{BoundaryType::Dirichlet, BoundaryType::Neumann};

}  // namespace

TEST_SUITE("operators1d") {
  TEST_CASE("Alpert mass matrix is the identity") {
    for (int k = 0; k <= 3; ++k) {
      const AlpertBasis1D b(k);
      const Eigen::MatrixXd M = assemble_mass(b, b, 5).dense();
      CHECK(max_abs(M - Eigen::MatrixXd::Identity(M.rows(), M.cols())) < 1e-12);
    }
  }

  TEST_CASE("declared triangularity matches the entries") {
    for (auto v : {InterpVariant::Inner, InterpVariant::Interface}) {
      const OperatorLibrary lib(2, 3, v, 4);
      for (const auto& bc : {kPeriodic, kDirichlet, kNeumann}) {
        check_triangularity(*lib.ipdg(bc, 160));
        check_triangularity(*lib.penalty(bc));
        check_triangularity(*lib.cross_volume(bc));
        check_triangularity(*lib.cross_jump(bc, Trace::HalfLeft));
        check_triangularity(*lib.energy(bc));
      }
      check_triangularity(*lib.cross_mass());
      check_triangularity(*lib.point_eval(0));
      check_triangularity(*lib.point_eval(1));
      check_triangularity(*lib.hierarchize());
      CHECK(lib.hierarchize()->triangularity() != Triangularity::General);
    }
  }

  TEST_CASE("cross mass maps surpluses of one to the projection of one") {
    const OperatorLibrary lib(1, 2, InterpVariant::Interface, 4);
    const int n = 16, p = 3;
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n * p);
    s.head(p).setOnes();
    const Eigen::VectorXd c = lib.cross_mass()->dense() * s;
    const auto proj = project_1d([](double) { return 1.0; }, lib.alpert(), 4);
    for (int i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - proj[i]) < 1e-13);
  }

  TEST_CASE("cross mass matches a fine quadrature oracle") {
    const int N = 2;
    const AlpertBasis1D A(1);
    const InterpBasis1D I(2, InterpVariant::Interface);
    const Eigen::MatrixXd X = assemble_mass(A, I, N).dense();
    std::vector<double> x, w;
    testing::finest_rule(N + 1, 10, x, w);
    for (int r = 0; r < X.rows(); ++r)
      for (int c = 0; c < X.cols(); ++c) {
        double s = 0;
        for (std::size_t t = 0; t < x.size(); ++t) s += w[t] * A.eval(r / 2, r % 2, x[t], 0, 0) * I.eval(c / 3, c % 3, x[t], 0, 0);
        CHECK(std::abs(X(r, c) - s) < 1e-12);
      }
  }

  TEST_CASE("volume derivative against quadrature") {
    const int N = 3;
    const AlpertBasis1D A(2);
    const Eigen::MatrixXd D = assemble_volume_derivative(A, A, N).dense();
    std::vector<double> x, w;
    testing::finest_rule(N, 6, x, w);
    for (int r = 0; r < D.rows(); ++r) {
      double s = 0;
      for (std::size_t t = 0; t < x.size(); ++t) s += w[t] * A.eval(r / 3, r % 3, x[t], 0, 1);
      CHECK(std::abs(D(r, 0) - s) < 1e-11);
    }
    for (int c = 0; c < D.cols(); ++c) CHECK(std::abs(D(0, c)) < 1e-14);
  }

  TEST_CASE("integration by parts identity") {
    const int N = 3;
    const AlpertBasis1D A(2);
    const InterpBasis1D I(3, InterpVariant::Interface);
    const Eigen::MatrixXd lhs = assemble_volume(A, 1, I, 0, N) + assemble_volume(A, 0, I, 1, N);
    const Eigen::MatrixXd rhs = assemble_trace(A, Trace::Jump, 0, I, Trace::Average, 0, N, kPeriodic) +
                                assemble_trace(A, Trace::Average, 0, I, Trace::Jump, 0, N, kPeriodic);
    CHECK(max_abs(lhs - rhs) < 1e-10 * max_abs(lhs));
  }

  TEST_CASE("penalty vanishes on continuous polynomials") {
    const int N = 4;
    const AlpertBasis1D A(2);
    const auto c = project_1d([](double x) { return 3 * x * x - x + 0.5; }, A, N);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    const Eigen::MatrixXd P = assemble_trace(A, A, N, TraceKind::Penalty, kNeumann).dense();
    CHECK((P * v).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(v.dot(P * v) < 1e-20);
    const Eigen::MatrixXd PD = assemble_trace(A, A, N, TraceKind::Penalty, kDirichlet).dense();
    CHECK(v.dot(PD * v) == doctest::Approx(0.25 + 2.5 * 2.5).epsilon(1e-12));
  }

  TEST_CASE("periodic operators are shift invariant within a level") {
    const int N = 4, p = 2, top = index_of(N, 0), cells = cells_at_level(N);
    const Eigen::MatrixXd S = assemble_ipdg_1d(AlpertBasis1D(1), N, 160, kPeriodic).dense();
    for (int j = 0; j < cells; ++j)
      for (int jj = 0; jj < cells; ++jj) {
        const Eigen::MatrixXd a = S.block((top + j) * p, (top + jj) * p, p, p);
        const Eigen::MatrixXd b = S.block((top + (j + 1) % cells) * p, (top + (jj + 1) % cells) * p, p, p);
        CHECK(max_abs(a - b) < 1e-10);
      }
  }

  TEST_CASE("IPDG matrix equals the finest-mesh assembly in the multiwavelet basis") {
    for (int k = 1; k <= 2; ++k)
      for (const auto& bc : {kPeriodic, kDirichlet, kNeumann, kMixed}) {
        const int N = 3;
        const double sh = 10 * std::ldexp(1.0, N);
        const AlpertBasis1D A(k);
        const Eigen::MatrixXd Q = basis_change(A, N, k);
        const Eigen::MatrixXd oracle = Q * fine_ipdg(N, k, sh, bc) * Q.transpose();
        const Eigen::MatrixXd S = assemble_ipdg_1d(A, N, sh, bc).dense();
        CHECK(max_abs(S - oracle) < 1e-11 * max_abs(oracle));
      }
  }

  TEST_CASE("IPDG matrix is symmetric positive semidefinite") {
    for (int k = 1; k <= 3; ++k)
      for (int N = 1; N <= 6; ++N)
        for (const auto& bc : {kPeriodic, kDirichlet, kNeumann}) {
          const Eigen::MatrixXd S = assemble_ipdg_1d(AlpertBasis1D(k), N, 10 * std::ldexp(1.0, N), bc).dense();
          CHECK(max_abs(S - S.transpose()) < 1e-12 * max_abs(S));
          const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues();
          CHECK(ev.minCoeff() >= -1e-10 * max_abs(S));
        }
  }

  TEST_CASE("LU split") {
    const OperatorLibrary lib(1, 2, InterpVariant::Interface, 4);
    const Operator1D& low = *lib.hierarchize();
    REQUIRE(low.triangularity() == Triangularity::Lower);
    const auto [L0, U0] = lu_split(low);
    CHECK(max_abs(L0.dense() - low.dense()) == 0.0);
    CHECK(max_abs(U0.dense()) == 0.0);

    std::mt19937_64 rng(5);
    const int n = 16 * 2;
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = std::uniform_real_distribution<double>(-1, 1)(rng);
    const Operator1D op(OpKind::Composite, 4, 2, 2, R);
    CHECK(op.triangularity() == Triangularity::General);
    const auto [L, U] = lu_split(op);
    CHECK(max_abs(L.dense() + U.dense() - R) == 0.0);
    CHECK(L.triangularity() == Triangularity::Lower);
    CHECK(U.triangularity() == Triangularity::StrictlyUpper);
  }

  TEST_CASE("hierarchize inverts point evaluation of the interpolatory basis") {
    for (auto v : {InterpVariant::Inner, InterpVariant::Interface})
      for (int M = 1; M <= 5; ++M) {
        const InterpBasis1D I(M, v);
        const Eigen::MatrixXd P = assemble_point_eval(I, I, 0, 4);
        const Eigen::MatrixXd H = assemble_hierarchize(I, 4);
        CHECK(max_abs(H * P - Eigen::MatrixXd::Identity(P.rows(), P.cols())) < 1e-10);
      }
  }

  TEST_CASE("library caches operators") {
    const OperatorLibrary lib(1, 2, InterpVariant::Interface, 3);
    CHECK(lib.penalty(kPeriodic).get() == lib.penalty(kPeriodic).get());
    CHECK(lib.penalty(kPeriodic).get() != lib.penalty(kDirichlet).get());
    CHECK(parse_boundary("neumann") == BoundaryType::Neumann);
    CHECK(to_string(BoundaryType::Dirichlet) == "dirichlet");
  }
}
