#include "mwdg/interp.hpp"

#include <cmath>

#include "mwdg/error.hpp"
#include "mwdg/grid.hpp"

namespace mwdg {

InterpVariant parse_variant(const std::string& s) {
  if (s == "inner") return InterpVariant::Inner;
  if (s == "interface") return InterpVariant::Interface;
  throw Error(ErrorCode::Config, "unknown interpolation variant '" + s + "'");
}

std::string to_string(InterpVariant v) { return v == InterpVariant::Inner ? "inner" : "interface"; }

namespace {

struct PointTable {
  std::vector<InterpPoint> x0, x1;
};

constexpr int L = -1, R = 1;

PointTable table(int M, InterpVariant v) {
  if (v == InterpVariant::Inner) {
    switch (M) {
      case 1: return {{{1. / 3, 0}, {2. / 3, 0}}, {{1. / 6, 0}, {5. / 6, 0}}};
      case 2: return {{{1. / 6, 0}, {1. / 3, 0}, {2. / 3, 0}}, {{1. / 12, 0}, {7. / 12, 0}, {5. / 6, 0}}};
      case 3:
        return {{{1. / 6, 0}, {1. / 3, 0}, {2. / 3, 0}, {5. / 6, 0}},
                {{1. / 12, 0}, {5. / 12, 0}, {7. / 12, 0}, {11. / 12, 0}}};
      case 4:
        return {{{1. / 6, 0}, {7. / 24, 0}, {1. / 3, 0}, {7. / 12, 0}, {2. / 3, 0}},
                {{1. / 12, 0}, {7. / 48, 0}, {31. / 48, 0}, {19. / 24, 0}, {5. / 6, 0}}};
      case 5:
        return {{{1. / 12, 0}, {1. / 6, 0}, {7. / 24, 0}, {1. / 3, 0}, {7. / 12, 0}, {2. / 3, 0}},
                {{7. / 48, 0}, {1. / 24, 0}, {31. / 48, 0}, {19. / 24, 0}, {5. / 6, 0}, {13. / 24, 0}}};
      default: break;
    }
  } else {
    switch (M) {
      case 1: return {{{0., R}, {1., L}}, {{0.5, L}, {0.5, R}}};
      case 2: return {{{0., R}, {0.5, L}, {1., L}}, {{0.25, L}, {0.5, R}, {0.75, L}}};
      case 3:
        return {{{0., R}, {1. / 3, 0}, {2. / 3, 0}, {1., L}}, {{1. / 6, 0}, {0.5, L}, {0.5, R}, {5. / 6, 0}}};
      case 4:
        return {{{0., R}, {0.25, L}, {0.5, L}, {0.75, L}, {1., L}},
                {{0.125, L}, {0.375, L}, {0.5, R}, {0.625, L}, {0.875, L}}};
      case 5:
        return {{{0., R}, {0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}, {1., L}},
                {{0.1, 0}, {0.3, 0}, {0.5, L}, {0.5, R}, {0.7, 0}, {0.9, 0}}};
      default: break;
    }
  }
  throw Error(ErrorCode::Unsupported, "interpolation degree M must be 1..5");
}

bool in_left_half(const InterpPoint& p) { return p.x < 0.5 || (p.x == 0.5 && p.side < 0); }

}  // namespace

InterpBasis1D::InterpBasis1D(int M, InterpVariant variant) : M_(M), variant_(variant) {
  const PointTable t = table(M, variant);
  x0_ = t.x0;
  x1_ = t.x1;
  std::vector<double> nodes0;
  for (const auto& p : x0_) nodes0.push_back(p.x);
  for (int i = 0; i <= M; ++i) {
    phi_.emplace_back(nodes0, i);
  }
  std::vector<InterpPoint> all = x0_;
  all.insert(all.end(), x1_.begin(), x1_.end());
  for (int i = 0; i <= M; ++i) {
    const bool left = in_left_half(x1_[i]);
    half_.push_back(left ? 0 : 1);
    std::vector<double> nodes;
    int self = -1;
    for (std::size_t n = 0; n < all.size(); ++n) {
      if (in_left_half(all[n]) != left) continue;
      if (n == x0_.size() + static_cast<std::size_t>(i)) self = static_cast<int>(nodes.size());
      nodes.push_back(all[n].x);
    }
    require(static_cast<int>(nodes.size()) == M + 1 && self >= 0, ErrorCode::Internal,
            "interpolation point table is not split evenly between halves");
    psi_.emplace_back(nodes, self);
  }
}

double InterpBasis1D::eval_phi(int i, double x, int der) const {
  require(i >= 0 && i <= M_, ErrorCode::InvalidArgument, "interpolation index out of range");
  return der == 0 ? phi_[i](x) : phi_[i].derivative(x);
}

double InterpBasis1D::eval_psi(int i, double t, int side, int der) const {
  require(i >= 0 && i <= M_, ErrorCode::InvalidArgument, "interpolation index out of range");
  const int s = resolve_side(t, side);
  if (t < 0 || t > 1 || (t == 0 && s < 0) || (t == 1 && s > 0)) return 0.0;
  const bool left = t < 0.5 || (t == 0.5 && s < 0);
  if (left != (half_[i] == 0)) return 0.0;
  return der == 0 ? psi_[i](t) : psi_[i].derivative(t);
}

double InterpBasis1D::eval_interp_wavelet(int i, int l, int j, double x, int side) const {
  require(l >= 0 && j >= 0 && j < cells_at_level(l), ErrorCode::InvalidArgument, "invalid level/cell");
  return eval(index_of(l, j), i, x, side, 0);
}

double InterpBasis1D::eval(int idx, int i, double x, int side, int der) const {
  const int s = resolve_side(x, side);
  if (idx == 0) {
    if (x < 0 || x > 1 || (x == 0 && s < 0) || (x == 1 && s > 0)) return 0.0;
    return eval_phi(i, x, der);
  }
  const int l = level_of_index(idx), j = cell_of_index(idx);
  const double scale = std::ldexp(1.0, l - 1);
  const double v = eval_psi(i, scale * x - j, s, der);
  return der == 1 ? v * scale : v;
}

InterpPoint InterpBasis1D::point(int idx, int i) const {
  if (idx == 0) return x0_[i];
  const int l = level_of_index(idx), j = cell_of_index(idx);
  return {std::ldexp(x1_[i].x + j, 1 - l), x1_[i].side};
}

InterpBasis1D make_interp_basis(int M, InterpVariant variant) { return InterpBasis1D(M, variant); }

}  // namespace mwdg
