#include "mwdg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mwdg/error.hpp"

namespace mwdg {

int MultiLevel::sum() const {
  int s = 0;
  for (int m = 0; m < d; ++m) s += l[m];
  return s;
}

int MultiLevel::max() const {
  int s = 0;
  for (int m = 0; m < d; ++m) s = std::max(s, l[m]);
  return s;
}

bool ElementKey::valid() const {
  if (d < 1 || d > kMaxDim) return false;
  for (int m = 0; m < d; ++m) {
    if (level[m] < 0 || level[m] > 15) return false;
    if (cell[m] < 0 || cell[m] >= cells_at_level(level[m])) return false;
  }
  return true;
}

MultiLevel ElementKey::levels() const {
  MultiLevel ml;
  ml.d = d;
  ml.l = level;
  return ml;
}

PackedKey ElementKey::pack() const {
  require(valid(), ErrorCode::InvalidArgument, "invalid element key");
  PackedKey key = 0;
  for (int m = 0; m < d; ++m) key = with_index(key, m, index_of(level[m], cell[m]));
  return key;
}

ElementKey ElementKey::unpack(PackedKey key, int d) {
  ElementKey e;
  e.d = d;
  for (int m = 0; m < d; ++m) {
    const int idx = key_index(key, m);
    e.level[m] = level_of_index(idx);
    e.cell[m] = cell_of_index(idx);
  }
  return e;
}

std::optional<ElementKey> parent(const ElementKey& key, int dim) {
  require(dim >= 0 && dim < key.d, ErrorCode::InvalidArgument, "dimension out of range");
  if (key.level[dim] == 0) return std::nullopt;
  ElementKey p = key;
  p.level[dim] -= 1;
  p.cell[dim] = p.level[dim] == 0 ? 0 : key.cell[dim] / 2;
  return p;
}

std::vector<ElementKey> children(const ElementKey& key, int dim, int N_max) {
  require(dim >= 0 && dim < key.d, ErrorCode::InvalidArgument, "dimension out of range");
  std::vector<ElementKey> out;
  if (key.level[dim] >= N_max) return out;
  ElementKey c = key;
  c.level[dim] += 1;
  if (key.level[dim] == 0) {
    c.cell[dim] = 0;
    out.push_back(c);
  } else {
    c.cell[dim] = 2 * key.cell[dim];
    out.push_back(c);
    c.cell[dim] += 1;
    out.push_back(c);
  }
  return out;
}

std::optional<PackedKey> parent_packed(PackedKey key, int dim) {
  const int idx = key_index(key, dim);
  if (idx == 0) return std::nullopt;
  return with_index(key, dim, idx / 2);
}

int level_sum(PackedKey key, int d) {
  int s = 0;
  for (int m = 0; m < d; ++m) s += key_level(key, m);
  return s;
}

int level_max(PackedKey key, int d) {
  int s = 0;
  for (int m = 0; m < d; ++m) s = std::max(s, key_level(key, m));
  return s;
}

std::size_t IndexSet::insert(PackedKey key) {
  auto [it, inserted] = pos_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) keys_.push_back(key);
  return it->second;
}

void IndexSet::reserve(std::size_t n) {
  keys_.reserve(n);
  pos_.reserve(n);
}

void IndexSet::canonicalize() {
  const int d = d_;
  std::sort(keys_.begin(), keys_.end(), [d](PackedKey a, PackedKey b) {
    const int la = level_sum(a, d), lb = level_sum(b, d);
    return la != lb ? la < lb : a < b;
  });
  for (std::size_t i = 0; i < keys_.size(); ++i) pos_[keys_[i]] = static_cast<std::uint32_t>(i);
}

AdaptiveGrid::AdaptiveGrid(int d, int k, int M, int N_max) : d_(d), k_(k), M_(M), N_max_(N_max), active_(d) {
  require(d >= 1 && d <= kMaxDim, ErrorCode::InvalidArgument, "dimension must be 1..3");
  require(k >= 0, ErrorCode::InvalidArgument, "degree must be nonnegative");
  require(N_max >= 0 && N_max <= 15, ErrorCode::InvalidArgument, "N_max must be 0..15");
  active_.insert(0);
}

int AdaptiveGrid::block_size() const {
  int b = 1;
  for (int m = 0; m < d_; ++m) b *= k_ + 1;
  return b;
}

bool AdaptiveGrid::insert_closed(PackedKey key) {
  if (active_.contains(key)) return false;
  require(level_max(key, d_) <= N_max_, ErrorCode::InvalidArgument, "key exceeds N_max");
  for (int m = 0; m < d_; ++m)
    if (auto p = parent_packed(key, m)) insert_closed(*p);
  active_.insert(key);
  return true;
}

bool AdaptiveGrid::is_leaf(PackedKey key) const {
  for (int m = 0; m < d_; ++m) {
    const int idx = key_index(key, m);
    if (level_of_index(idx) >= N_max_) continue;
    if (idx == 0) {
      if (active_.contains(with_index(key, m, 1))) return false;
    } else if (active_.contains(with_index(key, m, 2 * idx)) || active_.contains(with_index(key, m, 2 * idx + 1))) {
      return false;
    }
  }
  return true;
}

void AdaptiveGrid::remove_leaf(PackedKey key) {
  require(key != 0, ErrorCode::InvalidArgument, "the root element cannot be removed");
  require(active_.contains(key), ErrorCode::InvalidArgument, "key not active");
  require(is_leaf(key), ErrorCode::InvalidArgument, "removing a non-leaf breaks downward closure");
  IndexSet next(d_);
  next.reserve(active_.size());
  for (PackedKey k : active_.keys())
    if (k != key) next.insert(k);
  active_ = std::move(next);
}

void AdaptiveGrid::retain(const std::vector<char>& keep) {
  require(keep.size() == active_.size(), ErrorCode::InvalidArgument, "mask size does not match the active set");
  IndexSet next(d_);
  next.reserve(active_.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) next.insert(active_[i]);
  require(next.contains(0), ErrorCode::InvalidArgument, "the root element cannot be removed");
  active_ = std::move(next);
}

bool AdaptiveGrid::is_downward_closed() const {
  for (PackedKey key : active_.keys()) {
    if (level_max(key, d_) > N_max_) return false;
    for (int m = 0; m < d_; ++m)
      if (auto p = parent_packed(key, m); p && !active_.contains(*p)) return false;
  }
  return true;
}

std::string AdaptiveGrid::dump_centers() const {
  std::ostringstream os;
  os.precision(10);
  for (PackedKey key : active_.keys()) {
    const ElementKey e = ElementKey::unpack(key, d_);
    for (int m = 0; m < d_; ++m) os << e.level[m] << ' ';
    for (int m = 0; m < d_; ++m) os << e.cell[m] << ' ';
    for (int m = 0; m < d_; ++m) {
      const double h = e.level[m] == 0 ? 1.0 : std::ldexp(1.0, 1 - e.level[m]);
      os << (e.cell[m] + 0.5) * h << (m + 1 < d_ ? ' ' : '\n');
    }
  }
  return os.str();
}

namespace {

void enumerate_levels(int d, int N, bool sparse, const std::function<void(const std::array<int, kMaxDim>&)>& fn) {
  std::array<int, kMaxDim> l{};
  std::function<void(int, int)> rec = [&](int m, int used) {
    if (m == d) {
      fn(l);
      return;
    }
    const int top = sparse ? N - used : N;
    for (int v = 0; v <= top; ++v) {
      l[m] = v;
      rec(m + 1, used + v);
    }
  };
  rec(0, 0);
}

AdaptiveGrid build_grid(int d, int k, int N, int M, bool sparse) {
  require(d >= 1 && d <= kMaxDim && N >= 0 && k >= 0, ErrorCode::InvalidArgument, "invalid grid parameters");
  AdaptiveGrid g(d, k, M < 0 ? k + 1 : M, N);
  enumerate_levels(d, N, sparse, [&](const std::array<int, kMaxDim>& l) {
    std::array<int, kMaxDim> j{};
    std::function<void(int, PackedKey)> rec = [&](int m, PackedKey key) {
      if (m == d) {
        g.insert_closed(key);
        return;
      }
      for (j[m] = 0; j[m] < cells_at_level(l[m]); ++j[m]) rec(m + 1, with_index(key, m, index_of(l[m], j[m])));
    };
    rec(0, 0);
  });
  g.canonicalize();
  return g;
}

}  // namespace

AdaptiveGrid build_sparse_grid(int d, int k, int N, int M) { return build_grid(d, k, N, M, true); }

AdaptiveGrid build_full_grid(int d, int k, int N, int M, std::size_t max_coefficients) {
  double count = 1;
  for (int m = 0; m < d; ++m) count *= std::ldexp(k + 1.0, N);
  require(count <= static_cast<double>(max_coefficients), ErrorCode::InvalidArgument,
          "full grid exceeds the configured coefficient cap");
  return build_grid(d, k, N, M, false);
}

}  // namespace mwdg
