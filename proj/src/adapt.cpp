#include "mwdg/adapt.hpp"

#include <cmath>

#include "mwdg/error.hpp"

namespace mwdg {

void AdaptParams::validate() const {
  require(epsilon > 0, ErrorCode::InvalidArgument, "refinement threshold must be positive");
  const double t = coarsen_threshold();
  require(t > 0 && t < epsilon, ErrorCode::InvalidArgument, "thresholds must satisfy 0 < eta < epsilon");
  require(N_max >= 0 && N_max <= 15, ErrorCode::InvalidArgument, "N_max must be 0..15");
}

double element_indicator(const StateVector& state, const AdaptiveGrid& grid, std::size_t pos) {
  const std::size_t bs = grid.block_size();
  double s = 0;
  for (std::size_t i = pos * bs; i < (pos + 1) * bs; ++i) s += state.u[i] * state.u[i] + state.w[i] * state.w[i];
  return std::sqrt(s);
}

std::size_t refine(AdaptiveGrid& grid, StateVector& state, const AdaptParams& params) {
  params.validate();
  const int d = grid.d(), top = std::min(params.N_max, grid.N_max());
  const std::size_t before = grid.size();
  std::vector<PackedKey> hot;
  for (std::size_t e = 0; e < before; ++e)
    if (element_indicator(state, grid, e) > params.epsilon) hot.push_back(grid.keys()[e]);
  for (PackedKey key : hot)
    for (int m = 0; m < d; ++m) {
      const int idx = key_index(key, m);
      if (level_of_index(idx) >= top) continue;
      if (idx == 0) {
        grid.insert_closed(with_index(key, m, 1));
      } else {
        grid.insert_closed(with_index(key, m, 2 * idx));
        grid.insert_closed(with_index(key, m, 2 * idx + 1));
      }
    }
  state.u.resize(grid.dof(), 0.0);
  state.w.resize(grid.dof(), 0.0);
  return grid.size() - before;
}

std::size_t coarsen(AdaptiveGrid& grid, StateVector& state, const AdaptParams& params) {
  params.validate();
  const double eta = params.coarsen_threshold();
  const int d = grid.d();
  const std::size_t n = grid.size();
  std::vector<char> keep(n, 1), small(n, 0);
  for (std::size_t e = 0; e < n; ++e) small[e] = grid.keys()[e] != 0 && element_indicator(state, grid, e) < eta;
  auto alive = [&](PackedKey key) {
    const std::ptrdiff_t p = grid.find(key);
    return p >= 0 && keep[p];
  };
  auto is_leaf = [&](PackedKey key) {
    for (int m = 0; m < d; ++m) {
      const int idx = key_index(key, m);
      if (idx == 0 ? alive(with_index(key, m, 1))
                   : alive(with_index(key, m, 2 * idx)) || alive(with_index(key, m, 2 * idx + 1)))
        return false;
    }
    return true;
  };
  std::size_t removed = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t e = n; e-- > 0;) {
      if (!keep[e] || !small[e] || !is_leaf(grid.keys()[e])) continue;
      keep[e] = 0;
      ++removed;
      changed = true;
    }
  }
  if (removed == 0) return 0;
  const std::size_t bs = grid.block_size();
  StateVector next;
  next.u.reserve((n - removed) * bs);
  next.w.reserve((n - removed) * bs);
  for (std::size_t e = 0; e < n; ++e) {
    if (!keep[e]) continue;
    next.u.insert(next.u.end(), state.u.begin() + e * bs, state.u.begin() + (e + 1) * bs);
    next.w.insert(next.w.end(), state.w.begin() + e * bs, state.w.begin() + (e + 1) * bs);
  }
  grid.retain(keep);
  state = std::move(next);
  return removed;
}

Coeffs remap(const Coeffs& c, const AdaptiveGrid& from, const AdaptiveGrid& to) {
  const std::size_t bs = from.block_size();
  require(c.size() == from.dof() && to.block_size() == static_cast<int>(bs), ErrorCode::InvalidArgument,
          "coefficients do not match grid");
  Coeffs out(to.dof(), 0.0);
  for (std::size_t e = 0; e < from.size(); ++e) {
    const std::ptrdiff_t p = to.find(from.keys()[e]);
    if (p < 0) continue;
    std::copy(c.begin() + e * bs, c.begin() + (e + 1) * bs, out.begin() + p * bs);
  }
  return out;
}

}  // namespace mwdg
