#include "mwdg/ipdg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "mwdg/error.hpp"

namespace mwdg {

double evaluate(const SeparableSum& f, int d, const double* x, double t) {
  double s = 0;
  for (const auto& term : f) {
    double v = term.time ? term.time(t) : 1.0;
    for (int m = 0; m < d && v != 0.0; ++m) v *= term.factor[m](x[m]);
    s += v;
  }
  return s;
}

double ProblemSpec::exact_at(const double* x, double t) const {
  if (exact_point) return exact_point(x, t);
  return evaluate(exact, d, x, t);
}

void ProblemSpec::validate() const {
  require(d >= 1 && d <= kMaxDim, ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
  require(k >= 0 && k <= 6, ErrorCode::InvalidArgument, "polynomial degree must be in 0..6");
  require(N_max >= 0 && N_max <= 15, ErrorCode::InvalidArgument, "N_max must be in 0..15");
  require(sigma > 0, ErrorCode::InvalidArgument, "penalty sigma must be positive");
  require(cfl > 0, ErrorCode::InvalidArgument, "CFL number must be positive");
  require(T >= 0, ErrorCode::InvalidArgument, "final time must be non-negative");
  for (int m = 0; m < d; ++m)
    require((bc[m].low == BoundaryType::Periodic) == (bc[m].high == BoundaryType::Periodic),
            ErrorCode::InvalidArgument, "periodic faces must come in matching pairs");
  if (speed.kind == SpeedKind::Constant) {
    require(speed.value > 0, ErrorCode::InvalidArgument, "c^2 must be positive");
  } else {
    require(static_cast<bool>(speed.c2), ErrorCode::InvalidArgument, "variable wave speed needs an evaluator");
    require(speed.c2_min > 0 && speed.c2_min <= speed.c2_max, ErrorCode::InvalidArgument,
            "wave speed bounds must satisfy 0 < C_* <= C^*");
    require(dirichlet.empty(), ErrorCode::Unsupported,
            "inhomogeneous Dirichlet data requires a constant wave speed");
  }
  if (speed.kind == SpeedKind::Interface) {
    for (int m = 0; m < d; ++m)
      for (double x : speed.jumps[m]) {
        const double y = std::ldexp(x, N_max);
        require(std::abs(y - std::round(y)) < 1e-12, ErrorCode::InvalidArgument,
                "wave speed jump does not align with a finest-mesh face");
      }
  }
}

namespace {

// Block of the tensor product of 1D coefficient vectors at every active key.
void add_tensor(Coeffs& out, double scale, const std::array<const std::vector<double>*, kMaxDim>& f,
                const AdaptiveGrid& grid, int p) {
  const int d = grid.d(), bs = grid.block_size();
  for (std::size_t e = 0; e < grid.size(); ++e) {
    const PackedKey key = grid.keys()[e];
    std::array<const double*, kMaxDim> row{};
    for (int m = 0; m < d; ++m) row[m] = f[m]->data() + static_cast<std::size_t>(key_index(key, m)) * p;
    for (int a = 0; a < bs; ++a) {
      double v = scale;
      int r = a;
      for (int m = d - 1; m >= 0; --m) {
        v *= row[m][r % p];
        r /= p;
      }
      out[e * bs + a] += v;
    }
  }
}

// The 1D form is scale invariant in h, so a coarse level stands in for the configured one.
void check_coercive(const AlpertBasis1D& basis, double sigma, Boundary1D bc, int N) {
  const int n = std::min(N, 6);
  const Eigen::MatrixXd A = assemble_ipdg_1d(basis, n, sigma * std::ldexp(1.0, n), bc).dense();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
  require(ev.minCoeff() >= -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()), ErrorCode::InvalidArgument,
          "penalty sigma is too small: the IPDG form is not positive semidefinite");
}

}  // namespace

Coeffs project_separable(const std::vector<Fn1D>& factors, const AdaptiveGrid& grid, const AlpertBasis1D& basis,
                         int quad_points) {
  require(static_cast<int>(factors.size()) == grid.d(), ErrorCode::InvalidArgument, "one factor per dimension");
  std::vector<std::vector<double>> proj;
  std::array<const std::vector<double>*, kMaxDim> f{};
  for (int m = 0; m < grid.d(); ++m) proj.push_back(project_1d(factors[m], basis, grid.N_max(), quad_points));
  for (int m = 0; m < grid.d(); ++m) f[m] = &proj[m];
  Coeffs out(grid.dof(), 0.0);
  add_tensor(out, 1.0, f, grid, basis.p());
  return out;
}

Coeffs project_separable(const SeparableSum& f, double t, const AdaptiveGrid& grid, const AlpertBasis1D& basis,
                         int quad_points) {
  Coeffs out(grid.dof(), 0.0);
  for (const auto& term : f) {
    const double s = term.time ? term.time(t) : 1.0;
    if (s == 0.0) continue;
    std::vector<std::vector<double>> proj;
    std::array<const std::vector<double>*, kMaxDim> ptr{};
    for (int m = 0; m < grid.d(); ++m) proj.push_back(project_1d(term.factor[m], basis, grid.N_max(), quad_points));
    for (int m = 0; m < grid.d(); ++m) ptr[m] = &proj[m];
    add_tensor(out, s, ptr, grid, basis.p());
  }
  return out;
}

Coeffs sample_at_points(const PointFn& g, const AdaptiveGrid& grid, const InterpBasis1D& basis, int force_dim,
                        int force_side) {
  const int d = grid.d(), p = basis.p();
  int bs = 1;
  for (int m = 0; m < d; ++m) bs *= p;
  Coeffs out(grid.size() * bs);
  std::array<std::vector<InterpPoint>, kMaxDim> pts;
  for (std::size_t e = 0; e < grid.size(); ++e) {
    const PackedKey key = grid.keys()[e];
    for (int m = 0; m < d; ++m) {
      pts[m].resize(p);
      for (int i = 0; i < p; ++i) pts[m][i] = basis.point(key_index(key, m), i);
    }
    double x[kMaxDim];
    int s[kMaxDim];
    for (int a = 0; a < bs; ++a) {
      int r = a;
      for (int m = d - 1; m >= 0; --m) {
        const InterpPoint& pt = pts[m][r % p];
        x[m] = pt.x;
        s[m] = m == force_dim ? force_side : pt.side;
        r /= p;
      }
      out[e * bs + a] = g(x, s);
    }
  }
  return out;
}

Coeffs hierarchical_interpolate(const PointFn& f, const AdaptiveGrid& grid, const OperatorLibrary& lib) {
  return values_to_surplus(sample_at_points(f, grid, lib.interp()), grid, lib);
}

Coeffs interpolate_pointwise_product(const Coeffs& field, const PointFn& g, const AdaptiveGrid& grid,
                                     const OperatorLibrary& lib) {
  Coeffs v = alpert_to_point_values(field, grid, lib);
  const Coeffs gv = sample_at_points(g, grid, lib.interp());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= gv[i];
  return values_to_surplus(v, grid, lib);
}

SpatialOperator::SpatialOperator(ProblemSpec spec, std::shared_ptr<const OperatorLibrary> lib)
    : spec_(std::move(spec)), lib_(std::move(lib)), stiffness_(spec_.d), penalty_(spec_.d) {
  spec_.validate();
  require(lib_ != nullptr, ErrorCode::InvalidArgument, "operator library required");
  require(lib_->N() == spec_.N_max && lib_->alpert().k() == spec_.k && lib_->interp().M() == spec_.M,
          ErrorCode::InvalidArgument, "operator library does not match the problem");
  const int d = spec_.d;
  const double sh = sigma_over_h();
  const OpPtr idA = lib_->identity_alpert();
  if (spec_.speed.kind == SpeedKind::Constant) {
    const double c2 = spec_.speed.value;
    for (int m = 0; m < d; ++m) check_coercive(lib_->alpert(), spec_.sigma, spec_.bc[m], spec_.N_max);
    for (int m = 0; m < d; ++m) {
      std::array<OpPtr, kMaxDim> f{};
      for (int q = 0; q < d; ++q) f[q] = q == m ? lib_->ipdg(spec_.bc[m], sh / c2) : idA;
      stiffness_.add(f, -c2);
    }
  } else {
    const OpPtr X = lib_->cross_mass();
    const bool continuous = spec_.speed.kind == SpeedKind::Smooth;
    for (int m = 0; m < d; ++m) {
      std::array<OpPtr, kMaxDim> f{}, p{};
      for (int q = 0; q < d; ++q) f[q] = X;
      f[m] = lib_->cross_volume(spec_.bc[m]);
      flux_ops_.emplace_back(d);
      flux_ops_.back().add(f);
      if (continuous) {
        f[m] = lib_->cross_jump(spec_.bc[m], Trace::Average);
        jump_full_.emplace_back(d);
        jump_full_.back().add(f);
      } else {
        f[m] = lib_->cross_jump(spec_.bc[m], Trace::HalfLeft);
        jump_left_.emplace_back(d);
        jump_left_.back().add(f);
        f[m] = lib_->cross_jump(spec_.bc[m], Trace::HalfRight);
        jump_right_.emplace_back(d);
        jump_right_.back().add(f);
      }
      for (int q = 0; q < d; ++q) p[q] = q == m ? lib_->penalty(spec_.bc[m]) : idA;
      penalty_.add(p, -sh);
    }
  }

  // Volume source and Dirichlet boundary terms as separable 1D pieces.
  const AlpertBasis1D& A = lib_->alpert();
  const int N = spec_.N_max, pA = A.p();
  for (const auto& term : spec_.source) {
    SourcePiece piece;
    piece.time = term.time;
    for (int m = 0; m < d; ++m) piece.factor[m] = project_1d(term.factor[m], A, N);
    pieces_.push_back(std::move(piece));
  }
  if (!spec_.dirichlet.empty()) {
    const double c2 = spec_.speed.value;
    for (const auto& term : spec_.dirichlet) {
      std::array<std::vector<double>, kMaxDim> proj;
      for (int m = 0; m < d; ++m) proj[m] = project_1d(term.factor[m], A, N);
      for (int m = 0; m < d; ++m) {
        for (int face = 0; face < 2; ++face) {
          const BoundaryType b = face == 0 ? spec_.bc[m].low : spec_.bc[m].high;
          if (b != BoundaryType::Dirichlet) continue;
          const double xb = face, n = face == 0 ? -1.0 : 1.0;
          const int side = face == 0 ? 1 : -1;
          const double g = term.factor[m](xb);
          std::vector<double> vec(static_cast<std::size_t>(1 << N) * pA, 0.0);
          for (int idx = 0; idx < (1 << N); ++idx) {
            const auto [lo, hi] = element_support(idx);
            if (xb < lo || xb > hi) continue;
            for (int i = 0; i < pA; ++i)
              vec[idx * pA + i] = (-c2 * n * A.eval(idx, i, xb, side, 1) + sh * A.eval(idx, i, xb, side, 0)) * g;
          }
          SourcePiece piece;
          piece.time = term.time;
          for (int q = 0; q < d; ++q) piece.factor[q] = q == m ? vec : proj[q];
          pieces_.push_back(std::move(piece));
        }
      }
    }
  }
}

double SpatialOperator::sigma_over_h() const { return spec_.sigma * std::ldexp(1.0, spec_.N_max); }

void SpatialOperator::check_bounds(const Coeffs& c2_values) const {
  const double lo = spec_.speed.c2_min, hi = spec_.speed.c2_max;
  const double tol = 1e-12 * std::max(1.0, hi);
  for (double v : c2_values)
    require(std::isfinite(v) && v >= lo - tol && v <= hi + tol, ErrorCode::InvalidArgument,
            "wave speed leaves its declared bounds at a sample point");
}

std::shared_ptr<const SpatialOperator::Samples> SpatialOperator::samples(const AdaptiveGrid& grid) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (cache_ && cache_->keys == grid.keys()) return cache_;
  }
  auto s = std::make_shared<Samples>();
  s->keys = grid.keys();
  const InterpBasis1D& I = lib_->interp();
  const PointFn& c2 = spec_.speed.c2;
  s->c2 = sample_at_points(c2, grid, I);
  check_bounds(s->c2);
  if (spec_.speed.kind == SpeedKind::Interface) {
    for (int m = 0; m < spec_.d; ++m) {
      s->c2_left.push_back(sample_at_points(c2, grid, I, m, -1));
      s->c2_right.push_back(sample_at_points(c2, grid, I, m, 1));
      check_bounds(s->c2_left.back());
      check_bounds(s->c2_right.back());
    }
  }
  std::lock_guard<std::mutex> lock(cache_mu_);
  cache_ = s;
  return s;
}

Coeffs SpatialOperator::apply(const Coeffs& u, const AdaptiveGrid& grid) const {
  require(u.size() == grid.dof(), ErrorCode::InvalidArgument, "coefficient vector does not match grid");
  if (spec_.speed.kind == SpeedKind::Constant) return fast_apply(stiffness_, grid.active(), u, grid.active());
  return apply_variable(u, grid);
}

Coeffs SpatialOperator::apply_variable(const Coeffs& u, const AdaptiveGrid& grid) const {
  const auto s = samples(grid);
  const int d = spec_.d;
  std::vector<Coeffs> g(d), hl, hr;
  for (int m = 0; m < d; ++m) {
    Coeffs v = alpert_to_point_values(u, grid, *lib_, m);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= s->c2[i];
    g[m] = values_to_surplus(v, grid, *lib_);
  }
  const Coeffs uv = alpert_to_point_values(u, grid, *lib_);
  auto product = [&](const Coeffs& c) {
    Coeffs v = uv;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= c[i];
    return values_to_surplus(v, grid, *lib_);
  };
  if (spec_.speed.kind == SpeedKind::Smooth) {
    hl.push_back(product(s->c2));
  } else {
    for (int m = 0; m < d; ++m) {
      hl.push_back(product(s->c2_left[m]));
      hr.push_back(product(s->c2_right[m]));
    }
  }
  return apply_from_surpluses(g, hl, hr, u, grid);
}

Coeffs SpatialOperator::apply_from_surpluses(const std::vector<Coeffs>& g, const std::vector<Coeffs>& h_left,
                                             const std::vector<Coeffs>& h_right, const Coeffs& u,
                                             const AdaptiveGrid& grid) const {
  require(spec_.speed.kind != SpeedKind::Constant, ErrorCode::InvalidArgument,
          "surplus form requires a variable wave speed");
  const int d = spec_.d;
  const IndexSet& act = grid.active();
  Coeffs r = fast_apply(penalty_, act, u, act);
  auto acc = [&](const Coeffs& y) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  };
  for (int m = 0; m < d; ++m) {
    acc(fast_apply(flux_ops_[m], act, g[m], act));
    if (h_right.empty()) {
      const Coeffs& h = h_left.size() == 1 ? h_left[0] : h_left[m];
      if (!jump_full_.empty()) {
        acc(fast_apply(jump_full_[m], act, h, act));
      } else {
        acc(fast_apply(jump_left_[m], act, h, act));
        acc(fast_apply(jump_right_[m], act, h, act));
      }
    } else {
      require(!jump_left_.empty(), ErrorCode::InvalidArgument, "one-sided products need an interface wave speed");
      acc(fast_apply(jump_left_[m], act, h_left[m], act));
      acc(fast_apply(jump_right_[m], act, h_right[m], act));
    }
  }
  return r;
}

Coeffs SpatialOperator::source(const AdaptiveGrid& grid, double t) const {
  Coeffs out(grid.dof(), 0.0);
  const int pA = lib_->alpert().p();
  for (const auto& piece : pieces_) {
    const double s = piece.time ? piece.time(t) : 1.0;
    if (s == 0.0) continue;
    std::array<const std::vector<double>*, kMaxDim> f{};
    for (int m = 0; m < spec_.d; ++m) f[m] = &piece.factor[m];
    add_tensor(out, s, f, grid, pA);
  }
  return out;
}

double SpatialOperator::bilinear(const Coeffs& u, const Coeffs& v, const AdaptiveGrid& grid) const {
  const Coeffs r = apply(u, grid);
  require(v.size() == r.size(), ErrorCode::InvalidArgument, "coefficient vector does not match grid");
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s -= r[i] * v[i];
  return s;
}

Coeffs apply_Lh(const Coeffs& u, const SpatialOperator& op, const AdaptiveGrid& grid) { return op.apply(u, grid); }

Coeffs source_functional(const SpatialOperator& op, const AdaptiveGrid& grid, double t) {
  return op.source(grid, t);
}

double bilinear_value(const Coeffs& u, const Coeffs& v, const SpatialOperator& op, const AdaptiveGrid& grid) {
  return op.bilinear(u, v, grid);
}

double energy_norm(const Coeffs& v, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                   const std::array<Boundary1D, kMaxDim>& bc) {
  const int d = grid.d();
  TensorOperator E(d);
  const OpPtr id = lib.identity_alpert();
  for (int m = 0; m < d; ++m) {
    std::array<OpPtr, kMaxDim> f{};
    for (int q = 0; q < d; ++q) f[q] = q == m ? lib.energy(bc[m]) : id;
    E.add(f);
  }
  const Coeffs Ev = fast_apply(E, grid.active(), v, grid.active());
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += Ev[i] * v[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace mwdg
