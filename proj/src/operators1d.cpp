#include "mwdg/operators1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mwdg/error.hpp"
#include "mwdg/grid.hpp"

namespace mwdg {

BoundaryType parse_boundary(const std::string& s) {
  if (s == "periodic") return BoundaryType::Periodic;
  if (s == "dirichlet") return BoundaryType::Dirichlet;
  if (s == "neumann") return BoundaryType::Neumann;
  throw Error(ErrorCode::Config, "unknown boundary type '" + s + "'");
}

std::string to_string(BoundaryType b) {
  switch (b) {
    case BoundaryType::Periodic: return "periodic";
    case BoundaryType::Dirichlet: return "dirichlet";
    case BoundaryType::Neumann: return "neumann";
  }
  return "?";
}

Operator1D::Operator1D(OpKind kind, int N, int p_out, int p_in, Eigen::MatrixXd A)
    : kind_(kind), N_(N), p_out_(p_out), p_in_(p_in), A_(std::move(A)) {
  const int n = 1 << N;
  require(A_.rows() == n * p_out && A_.cols() == n * p_in, ErrorCode::Internal, "operator shape mismatch");
  rows_.assign(n, {});
  cols_.assign(n, {});
  bool lower = true, slower = true, upper = true, supper = true;
  for (int o = 0; o < n; ++o) {
    for (int i = 0; i < n; ++i) {
      const auto blk = A_.block(o * p_out, i * p_in, p_out, p_in);
      if ((blk.array() == 0.0).all()) continue;
      const int offset = static_cast<int>(blocks_.size());
      for (int a = 0; a < p_out; ++a)
        for (int b = 0; b < p_in; ++b) blocks_.push_back(blk(a, b));
      rows_[o].push_back({i, offset});
      cols_[i].push_back({o, offset});
      const int lo = level_of_index(o), li = level_of_index(i);
      lower &= lo >= li;
      slower &= lo > li;
      upper &= lo <= li;
      supper &= lo < li;
    }
  }
  tri_ = slower ? Triangularity::StrictlyLower
       : lower  ? Triangularity::Lower
       : supper ? Triangularity::StrictlyUpper
       : upper  ? Triangularity::Upper
                : Triangularity::General;
}

Operator1D Operator1D::identity(int N, int p) {
  Operator1D op(OpKind::Identity, 0, p, p, Eigen::MatrixXd::Identity(p, p));
  op.N_ = N;
  op.identity_ = true;
  op.tri_ = Triangularity::Lower;
  op.A_.resize(0, 0);
  op.blocks_.clear();
  op.rows_.clear();
  op.cols_.clear();
  return op;
}

Eigen::MatrixXd Operator1D::dense() const {
  if (identity_) return Eigen::MatrixXd::Identity(n() * p_out_, n() * p_in_);
  return A_;
}

std::size_t Operator1D::block_count() const {
  std::size_t c = 0;
  for (const auto& r : rows_) c += r.size();
  return c;
}

std::pair<Operator1D, Operator1D> lu_split(const Operator1D& op) {
  const Eigen::MatrixXd A = op.dense();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(A.rows(), A.cols()), U = L;
  const int n = op.n();
  for (int o = 0; o < n; ++o)
    for (int i = 0; i < n; ++i) {
      auto& target = level_of_index(o) >= level_of_index(i) ? L : U;
      target.block(o * op.p_out(), i * op.p_in(), op.p_out(), op.p_in()) =
          A.block(o * op.p_out(), i * op.p_in(), op.p_out(), op.p_in());
    }
  return {Operator1D(op.kind(), op.N(), op.p_out(), op.p_in(), std::move(L)),
          Operator1D(op.kind(), op.N(), op.p_out(), op.p_in(), std::move(U))};
}

namespace {

// Elements whose closed support contains x approached from the given side.
std::vector<int> chain_at(double x, int side, int N) {
  std::vector<int> out;
  const int s = resolve_side(x, side);
  if (x < 0 || x > 1 || (x == 0 && s < 0) || (x == 1 && s > 0)) return out;
  out.push_back(0);
  for (int l = 1; l <= N; ++l) {
    const double y = std::ldexp(x, l - 1);
    int j = static_cast<int>(std::floor(y));
    if (y == j && s < 0) --j;
    if (j < 0 || j >= cells_at_level(l)) continue;
    out.push_back(index_of(l, j));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_volume(const Basis1D& rows, int row_der, const Basis1D& cols, int col_der, int N) {
  const int n = 1 << N, pr = rows.p(), pc = cols.p();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * pr, n * pc);
  const Quadrature1D q = gauss_legendre(std::max(pr, pc) + 2);
  std::vector<double> rf(pr * q.size() * 2), cf(pc * q.size() * 2), rc(pr * q.size() * 2), cc(pc * q.size() * 2),
      w(q.size() * 2);
  for (int f = 0; f < n; ++f) {
    const auto [lo, hi] = element_support(f);
    const double mid = 0.5 * (lo + hi), hh = 0.5 * (hi - lo);
    std::vector<double> xs;
    for (int half = 0; half < 2; ++half)
      for (int t = 0; t < q.size(); ++t) {
        xs.push_back((half == 0 ? lo : mid) + hh * q.nodes[t]);
        w[half * q.size() + t] = hh * q.weights[t];
      }
    const int nq = static_cast<int>(xs.size());
    for (int t = 0; t < nq; ++t) {
      for (int a = 0; a < pr; ++a) rf[a * nq + t] = rows.eval(f, a, xs[t], 0, row_der);
      for (int b = 0; b < pc; ++b) cf[b * nq + t] = cols.eval(f, b, xs[t], 0, col_der);
    }
    for (int c = f;; c /= 2) {
      for (int t = 0; t < nq; ++t) {
        for (int a = 0; a < pr; ++a) rc[a * nq + t] = rows.eval(c, a, xs[t], 0, row_der);
        for (int b = 0; b < pc; ++b) cc[b * nq + t] = cols.eval(c, b, xs[t], 0, col_der);
      }
      for (int a = 0; a < pr; ++a)
        for (int b = 0; b < pc; ++b) {
          double s1 = 0, s2 = 0;
          for (int t = 0; t < nq; ++t) {
            s1 += w[t] * rf[a * nq + t] * cc[b * nq + t];
            s2 += w[t] * rc[a * nq + t] * cf[b * nq + t];
          }
          A(f * pr + a, c * pc + b) = s1;
          if (c != f) A(c * pr + a, f * pc + b) = s2;
        }
      if (c == 0) break;
    }
  }
  return A;
}

namespace {

struct FaceTraces {
  std::vector<int> elems;
  std::vector<double> left, right;  // p values per element
};

FaceTraces face_traces(const Basis1D& fam, int der, double xl, double xr, bool has_left, bool has_right, int N) {
  FaceTraces ft;
  std::vector<int> cl = has_left ? chain_at(xl, -1, N) : std::vector<int>{};
  std::vector<int> cr = has_right ? chain_at(xr, 1, N) : std::vector<int>{};
  ft.elems = cl;
  for (int e : cr)
    if (std::find(ft.elems.begin(), ft.elems.end(), e) == ft.elems.end()) ft.elems.push_back(e);
  const int p = fam.p();
  for (int e : ft.elems)
    for (int i = 0; i < p; ++i) {
      ft.left.push_back(has_left ? fam.eval(e, i, xl, -1, der) : 0.0);
      ft.right.push_back(has_right ? fam.eval(e, i, xr, 1, der) : 0.0);
    }
  return ft;
}

double combine(Trace t, double L, double R, bool boundary) {
  const double h = boundary ? 1.0 : 0.5;
  switch (t) {
    case Trace::Jump: return L - R;
    case Trace::Average: return h * (L + R);
    case Trace::HalfLeft: return h * L;
    case Trace::HalfRight: return h * R;
  }
  return 0;
}

}  // namespace

Eigen::MatrixXd assemble_trace(const Basis1D& rows, Trace row_trace, int row_der, const Basis1D& cols,
                               Trace col_trace, int col_der, int N, Boundary1D bc) {
  require((bc.low == BoundaryType::Periodic) == (bc.high == BoundaryType::Periodic), ErrorCode::InvalidArgument,
          "periodic faces must come in pairs");
  const int n = 1 << N, pr = rows.p(), pc = cols.p();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * pr, n * pc);
  auto accumulate = [&](double xl, double xr, bool has_left, bool has_right, bool boundary) {
    const FaceTraces tr = face_traces(rows, row_der, xl, xr, has_left, has_right, N);
    const FaceTraces tc = face_traces(cols, col_der, xl, xr, has_left, has_right, N);
    for (std::size_t ea = 0; ea < tr.elems.size(); ++ea)
      for (int a = 0; a < pr; ++a) {
        const double va = combine(row_trace, tr.left[ea * pr + a], tr.right[ea * pr + a], boundary);
        if (va == 0.0) continue;
        for (std::size_t eb = 0; eb < tc.elems.size(); ++eb)
          for (int b = 0; b < pc; ++b) {
            const double vb = combine(col_trace, tc.left[eb * pc + b], tc.right[eb * pc + b], boundary);
            A(tr.elems[ea] * pr + a, tc.elems[eb] * pc + b) += va * vb;
          }
      }
  };
  for (int c = 1; c < n; ++c) {
    const double x = std::ldexp(static_cast<double>(c), -N);
    accumulate(x, x, true, true, false);
  }
  if (bc.low == BoundaryType::Periodic) {
    accumulate(1.0, 0.0, true, true, false);
  } else {
    if (bc.low == BoundaryType::Dirichlet) accumulate(0.0, 0.0, false, true, true);
    if (bc.high == BoundaryType::Dirichlet) accumulate(1.0, 1.0, true, false, true);
  }
  return A;
}

Eigen::MatrixXd assemble_point_eval(const InterpBasis1D& points, const Basis1D& cols, int der, int N) {
  const int n = 1 << N, pp = points.p(), pc = cols.p();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * pp, n * pc);
  for (int e = 0; e < n; ++e)
    for (int i = 0; i < pp; ++i) {
      const InterpPoint pt = points.point(e, i);
      for (int c : chain_at(pt.x, pt.side, N))
        for (int b = 0; b < pc; ++b) A(e * pp + i, c * pc + b) = cols.eval(c, b, pt.x, pt.side, der);
    }
  return A;
}

Eigen::MatrixXd assemble_hierarchize(const InterpBasis1D& basis, int N) {
  const int p = basis.p(), n = (1 << N) * p;
  Eigen::MatrixXd Psi = assemble_point_eval(basis, basis, 0, N);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (level_of_index(c / p) >= level_of_index(r / p)) {
        require(std::abs(Psi(r, c) - (r == c ? 1.0 : 0.0)) < 1e-10, ErrorCode::Internal,
                "interpolatory basis violates the delta property");
        Psi(r, c) = r == c ? 1.0 : 0.0;
      } else if (std::abs(Psi(r, c)) < 1e-14) {
        Psi(r, c) = 0.0;
      }
    }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> X =
      Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < r; ++c)
      if (Psi(r, c) != 0.0) X.row(r) -= Psi(r, c) * X.row(c);
  return X;
}

Operator1D assemble_mass(const Basis1D& rows, const Basis1D& cols, int N) {
  return Operator1D(OpKind::Mass, N, rows.p(), cols.p(), assemble_volume(rows, 0, cols, 0, N));
}

Operator1D assemble_volume_derivative(const Basis1D& rows, const Basis1D& cols, int N) {
  return Operator1D(OpKind::VolumeDerivative, N, rows.p(), cols.p(), assemble_volume(rows, 1, cols, 0, N));
}

Operator1D assemble_trace(const Basis1D& rows, const Basis1D& cols, int N, TraceKind kind, Boundary1D bc) {
  switch (kind) {
    case TraceKind::AverageOfDerivative:
      return Operator1D(OpKind::TraceAverage, N, rows.p(), cols.p(),
                        assemble_trace(rows, Trace::Jump, 0, cols, Trace::Average, 1, N, bc));
    case TraceKind::JumpOfValue:
      return Operator1D(OpKind::TraceJump, N, rows.p(), cols.p(),
                        assemble_trace(rows, Trace::Average, 1, cols, Trace::Jump, 0, N, bc));
    case TraceKind::Penalty:
      return Operator1D(OpKind::Penalty, N, rows.p(), cols.p(),
                        assemble_trace(rows, Trace::Jump, 0, cols, Trace::Jump, 0, N, bc));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown trace kind");
}

Operator1D assemble_ipdg_1d(const AlpertBasis1D& basis, int N, double sigma_over_h, Boundary1D bc) {
  const Eigen::MatrixXd K = assemble_volume(basis, 1, basis, 1, N);
  const Eigen::MatrixXd T = assemble_trace(basis, Trace::Jump, 0, basis, Trace::Average, 1, N, bc);
  const Eigen::MatrixXd P = assemble_trace(basis, Trace::Jump, 0, basis, Trace::Jump, 0, N, bc);
  Eigen::MatrixXd S = K - T - T.transpose() + sigma_over_h * P;
  return Operator1D(OpKind::Composite, N, basis.p(), basis.p(), std::move(S));
}

OperatorLibrary::OperatorLibrary(int k, int M, InterpVariant variant, int N)
    : N_(N), alpert_(k), interp_(M, variant) {}

OpPtr OperatorLibrary::cached(const std::string& key, const std::function<Operator1D()>& build) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto op = std::make_shared<const Operator1D>(build());
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.try_emplace(key, std::move(op)).first->second;
}

namespace {
std::string bc_key(Boundary1D bc) { return to_string(bc.low) + "/" + to_string(bc.high); }
}  // namespace

OpPtr OperatorLibrary::identity_alpert() const {
  return cached("idA", [&] { return Operator1D::identity(N_, alpert_.p()); });
}

OpPtr OperatorLibrary::identity_interp() const {
  return cached("idI", [&] { return Operator1D::identity(N_, interp_.p()); });
}

OpPtr OperatorLibrary::ipdg(Boundary1D bc, double sigma_over_h) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", sigma_over_h);
  return cached("ipdg:" + bc_key(bc) + ":" + buf, [&] { return assemble_ipdg_1d(alpert_, N_, sigma_over_h, bc); });
}

OpPtr OperatorLibrary::penalty(Boundary1D bc) const {
  return cached("pen:" + bc_key(bc), [&] { return assemble_trace(alpert_, alpert_, N_, TraceKind::Penalty, bc); });
}

OpPtr OperatorLibrary::energy(Boundary1D bc) const {
  return cached("energy:" + bc_key(bc), [&] {
    const double h = std::ldexp(1.0, -N_);
    const Eigen::MatrixXd K = assemble_volume(alpert_, 1, alpert_, 1, N_);
    const Eigen::MatrixXd A = assemble_trace(alpert_, Trace::Average, 1, alpert_, Trace::Average, 1, N_, bc);
    const Eigen::MatrixXd P = assemble_trace(alpert_, Trace::Jump, 0, alpert_, Trace::Jump, 0, N_, bc);
    return Operator1D(OpKind::Composite, N_, alpert_.p(), alpert_.p(), K + h * A + P / h);
  });
}

OpPtr OperatorLibrary::cross_volume(Boundary1D bc) const {
  return cached("xvol:" + bc_key(bc), [&] {
    const Eigen::MatrixXd D = assemble_volume(alpert_, 1, interp_, 0, N_);
    const Eigen::MatrixXd T = assemble_trace(alpert_, Trace::Jump, 0, interp_, Trace::Average, 0, N_, bc);
    return Operator1D(OpKind::CrossDerivative, N_, alpert_.p(), interp_.p(), T - D);
  });
}

OpPtr OperatorLibrary::cross_jump(Boundary1D bc, Trace test_side) const {
  return cached("xjmp:" + bc_key(bc) + ":" + std::to_string(static_cast<int>(test_side)), [&] {
    return Operator1D(OpKind::CrossTrace, N_, alpert_.p(), interp_.p(),
                      assemble_trace(alpert_, test_side, 1, interp_, Trace::Jump, 0, N_, bc));
  });
}

OpPtr OperatorLibrary::cross_mass() const {
  return cached("xmass", [&] {
    return Operator1D(OpKind::CrossMass, N_, alpert_.p(), interp_.p(), assemble_volume(alpert_, 0, interp_, 0, N_));
  });
}

OpPtr OperatorLibrary::point_eval(int der) const {
  return cached("E" + std::to_string(der), [&] {
    return Operator1D(OpKind::PointEval, N_, interp_.p(), alpert_.p(), assemble_point_eval(interp_, alpert_, der, N_));
  });
}

OpPtr OperatorLibrary::hierarchize() const {
  return cached("hier", [&] {
    return Operator1D(OpKind::Hierarchize, N_, interp_.p(), interp_.p(), assemble_hierarchize(interp_, N_));
  });
}

}  // namespace mwdg
