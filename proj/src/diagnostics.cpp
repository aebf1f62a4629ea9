#include "mwdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mwdg/error.hpp"

namespace mwdg {

double discrete_energy(const StateVector& state, const SpatialOperator& op, const AdaptiveGrid& grid) {
  double w2 = 0;
  for (double v : state.w) w2 += v * v;
  return 0.5 * w2 + 0.5 * op.bilinear(state.u, state.u, grid);
}

double separable_norm2(const SeparableSum& f, int d, double t) {
  constexpr int kCells = 256;
  const Quadrature1D q = gauss_legendre(16);
  const std::size_t n = f.size();
  std::vector<double> T(n);
  for (std::size_t a = 0; a < n; ++a) T[a] = f[a].time ? f[a].time(t) : 1.0;
  std::vector<double> xs, ws;
  for (int c = 0; c < kCells; ++c)
    for (int i = 0; i < q.size(); ++i) {
      xs.push_back((c + q.nodes[i]) / kCells);
      ws.push_back(q.weights[i] / kCells);
    }
  std::vector<std::vector<std::vector<double>>> vals(n, std::vector<std::vector<double>>(d));
  for (std::size_t a = 0; a < n; ++a)
    for (int m = 0; m < d; ++m) {
      vals[a][m].resize(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) vals[a][m][i] = f[a].factor[m](xs[i]);
    }
  double s = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double prod = T[a] * T[b];
      for (int m = 0; m < d && prod != 0.0; ++m) {
        double I = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) I += ws[i] * vals[a][m][i] * vals[b][m][i];
        prod *= I;
      }
      s += prod;
    }
  return s;
}

double l2_error(const Coeffs& u, const ProblemSpec& spec, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                double t) {
  require(spec.has_exact(), ErrorCode::InvalidArgument, "no exact solution available");
  require(u.size() == grid.dof(), ErrorCode::InvalidArgument, "coefficient vector does not match grid");
  Coeffs pu;
  double u2;
  if (!spec.exact.empty()) {
    pu = project_separable(spec.exact, t, grid, lib.alpert());
    u2 = separable_norm2(spec.exact, spec.d, t);
  } else {
    const PointFn f = [&](const double* x, const int*) { return spec.exact_point(x, t); };
    pu = surplus_to_alpert(hierarchical_interpolate(f, grid, lib), grid, lib);
    u2 = -1;
    if (spec.exact_norm2) u2 = spec.exact_norm2(t);
  }
  // |u_h|^2 - 2 (u_h, u) + |u|^2 regrouped as |u_h - P u|^2 + (|u|^2 - |P u|^2).
  double diff2 = 0, pu2 = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    diff2 += (u[i] - pu[i]) * (u[i] - pu[i]);
    pu2 += pu[i] * pu[i];
  }
  const double rest = u2 < 0 ? 0.0 : u2 - pu2;
  require(rest >= -1e-14 * std::max(1.0, u2), ErrorCode::Internal, "negative squared error: inconsistent inputs");
  return std::sqrt(diff2 + std::max(0.0, rest));
}

LatticeEvaluator::LatticeEvaluator(const AdaptiveGrid& grid, const AlpertBasis1D& basis,
                                   std::array<std::vector<double>, kMaxDim> axes)
    : grid_(grid), basis_(basis), axes_(std::move(axes)) {
  const int d = grid.d(), p = basis.p(), n = 1 << grid.N_max();
  for (int m = 0; m < d; ++m) {
    auto& ax = axes_[m];
    require(!ax.empty() && std::is_sorted(ax.begin(), ax.end()), ErrorCode::InvalidArgument,
            "lattice axes must be non-empty and sorted");
    tables_[m].assign(n, {});
    std::vector<char> used(n, 0);
    for (PackedKey key : grid.keys()) used[key_index(key, m)] = 1;
    for (int idx = 0; idx < n; ++idx) {
      if (!used[idx]) continue;
      const auto [lo, hi] = element_support(idx);
      const int first = static_cast<int>(std::lower_bound(ax.begin(), ax.end(), lo) - ax.begin());
      const int last = static_cast<int>(std::upper_bound(ax.begin(), ax.end(), hi) - ax.begin());
      const int cnt = last - first;
      std::vector<double> v(static_cast<std::size_t>(p) * std::max(cnt, 0));
      for (int i = 0; i < p; ++i)
        for (int a = 0; a < cnt; ++a) v[i * cnt + a] = basis.eval(idx, i, ax[first + a], 0, 0);
      tables_[m][idx] = {first, std::move(v)};
    }
  }
}

std::array<std::vector<double>, kMaxDim> LatticeEvaluator::uniform_axes(int d, int n) {
  std::array<std::vector<double>, kMaxDim> axes;
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < n; ++i) axes[m].push_back((i + 0.5) / n);
  return axes;
}

std::size_t LatticeEvaluator::size() const {
  std::size_t s = 1;
  for (int m = 0; m < grid_.d(); ++m) s *= axes_[m].size();
  return s;
}

std::vector<double> LatticeEvaluator::evaluate(const Coeffs& u) const {
  const int d = grid_.d(), p = basis_.p(), bs = grid_.block_size();
  require(u.size() == grid_.dof(), ErrorCode::InvalidArgument, "coefficient vector does not match grid");
  std::array<int, kMaxDim> total{1, 1, 1};
  for (int m = 0; m < d; ++m) total[m] = static_cast<int>(axes_[m].size());
  std::vector<double> out(size(), 0.0);
  std::vector<double> cur, next;
  for (std::size_t e = 0; e < grid_.size(); ++e) {
    const PackedKey key = grid_.keys()[e];
    std::array<int, kMaxDim> ext{}, first{};
    std::array<const std::vector<double>*, kMaxDim> tab{};
    bool empty = false;
    for (int m = 0; m < d; ++m) {
      const auto& t = tables_[m][key_index(key, m)];
      first[m] = t.first;
      ext[m] = p;
      tab[m] = &t.second;
      empty |= t.second.empty();
    }
    if (empty) continue;
    cur.assign(u.begin() + e * bs, u.begin() + (e + 1) * bs);
    for (int m = d - 1; m >= 0; --m) {
      const int cnt = static_cast<int>(tab[m]->size() / p);
      int pre = 1, post = 1;
      for (int q = 0; q < m; ++q) pre *= ext[q];
      for (int q = m + 1; q < d; ++q) post *= ext[q];
      next.assign(static_cast<std::size_t>(pre) * cnt * post, 0.0);
      const double* V = tab[m]->data();
      for (int a0 = 0; a0 < pre; ++a0)
        for (int i = 0; i < p; ++i) {
          const double* src = cur.data() + (static_cast<std::size_t>(a0) * p + i) * post;
          for (int a = 0; a < cnt; ++a) {
            const double v = V[i * cnt + a];
            if (v == 0.0) continue;
            double* dst = next.data() + (static_cast<std::size_t>(a0) * cnt + a) * post;
            for (int q = 0; q < post; ++q) dst[q] += v * src[q];
          }
        }
      ext[m] = cnt;
      cur.swap(next);
    }
    // Scatter the box into the global lattice.
    std::array<int, kMaxDim> it{};
    for (std::size_t b = 0; b < cur.size(); ++b) {
      std::size_t g = 0;
      for (int m = 0; m < d; ++m) g = g * total[m] + first[m] + it[m];
      out[g] += cur[b];
      for (int m = d - 1; m >= 0; --m) {
        if (++it[m] < ext[m]) break;
        it[m] = 0;
      }
    }
  }
  return out;
}

double sampled_linf_error(const Coeffs& u, const ProblemSpec& spec, const AdaptiveGrid& grid,
                          const OperatorLibrary& lib, double t, int n) {
  require(spec.has_exact(), ErrorCode::InvalidArgument, "no exact solution available");
  LatticeEvaluator ev(grid, lib.alpert(), LatticeEvaluator::uniform_axes(grid.d(), n));
  const std::vector<double> v = ev.evaluate(u);
  const int d = grid.d();
  double err = 0;
  std::array<int, kMaxDim> it{};
  double x[kMaxDim];
  for (std::size_t g = 0; g < v.size(); ++g) {
    for (int m = 0; m < d; ++m) x[m] = ev.axes()[m][it[m]];
    err = std::max(err, std::abs(v[g] - spec.exact_at(x, t)));
    for (int m = d - 1; m >= 0; --m) {
      if (++it[m] < n) break;
      it[m] = 0;
    }
  }
  return err;
}

void convergence_rates(std::vector<TableRow>& rows, TableKind kind) {
  for (auto& r : rows) require(r.error > 0, ErrorCode::InvalidArgument, "errors must be positive to fit rates");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].has_rate = i > 0;
    if (i == 0) continue;
    const TableRow& a = rows[i - 1];
    TableRow& b = rows[i];
    const double de = std::log(b.error) - std::log(a.error);
    if (kind == TableKind::Mesh) {
      b.order = -de / std::log(2.0) / (b.param - a.param);
    } else {
      b.r_dof = -de / (std::log(static_cast<double>(b.dof)) - std::log(static_cast<double>(a.dof)));
      b.r_eps = de / (std::log(b.param) - std::log(a.param));
    }
  }
}

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_table(const std::vector<TableRow>& rows, TableKind kind) {
  std::ostringstream os;
  if (kind == TableKind::Mesh) {
    os << "N,DoF,l2_error,order\n";
    for (const auto& r : rows)
      os << static_cast<int>(r.param) << ',' << r.dof << ',' << format_g6(r.error) << ','
         << (r.has_rate ? format_g6(r.order) : "") << '\n';
  } else {
    os << "epsilon,DoF,l2_error,R_DoF,R_eps\n";
    for (const auto& r : rows)
      os << format_g6(r.param) << ',' << r.dof << ',' << format_g6(r.error) << ','
         << (r.has_rate ? format_g6(r.r_dof) : "") << ',' << (r.has_rate ? format_g6(r.r_eps) : "") << '\n';
  }
  return os.str();
}

std::string RunRecord::to_csv(bool with_wall_time) const {
  std::ostringstream os;
  os << config_echo << (with_wall_time ? "t,DoF,l2_error,energy,wall_time\n" : "t,DoF,l2_error,energy\n");
  for (const auto& r : rows) {
    os << format_g6(r.t) << ',' << r.dof << ',' << (r.l2_error >= 0 ? format_g6(r.l2_error) : "") << ','
       << format_g6(r.energy);
    if (with_wall_time) os << ',' << format_g6(r.wall_time);
    os << '\n';
  }
  return os.str();
}

}  // namespace mwdg
