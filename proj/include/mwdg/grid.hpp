#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace mwdg {

inline constexpr int kMaxDim = 3;

// One 16-bit hierarchical 1D index per dimension: 0 for level 0, 2^{l-1}+j otherwise.
using PackedKey = std::uint64_t;

inline int level_of_index(int idx) { return idx == 0 ? 0 : std::bit_width(static_cast<unsigned>(idx)); }
inline int cell_of_index(int idx) { return idx == 0 ? 0 : idx - (1 << (level_of_index(idx) - 1)); }
inline int index_of(int level, int cell) { return level == 0 ? 0 : (1 << (level - 1)) + cell; }
inline int cells_at_level(int level) { return level == 0 ? 1 : 1 << (level - 1); }

inline int key_index(PackedKey key, int dim) { return static_cast<int>((key >> (16 * dim)) & 0xFFFFu); }
inline PackedKey with_index(PackedKey key, int dim, int idx) {
  const PackedKey mask = PackedKey{0xFFFFu} << (16 * dim);
  return (key & ~mask) | (static_cast<PackedKey>(idx) << (16 * dim));
}
inline int key_level(PackedKey key, int dim) { return level_of_index(key_index(key, dim)); }

struct MultiLevel {
  int d = 1;
  std::array<int, kMaxDim> l{};

  int sum() const;
  int max() const;
};

struct ElementKey {
  int d = 1;
  std::array<int, kMaxDim> level{};
  std::array<int, kMaxDim> cell{};

  bool valid() const;
  MultiLevel levels() const;
  PackedKey pack() const;
  static ElementKey unpack(PackedKey key, int d);
  friend bool operator==(const ElementKey& a, const ElementKey& b) {
    return a.d == b.d && a.level == b.level && a.cell == b.cell;
  }
};

std::optional<ElementKey> parent(const ElementKey& key, int dim);
std::vector<ElementKey> children(const ElementKey& key, int dim, int N_max);
std::optional<PackedKey> parent_packed(PackedKey key, int dim);

int level_sum(PackedKey key, int d);
int level_max(PackedKey key, int d);

// Insertion-ordered key set with O(1) lookup.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(int d) : d_(d) {}

  int d() const { return d_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const std::vector<PackedKey>& keys() const { return keys_; }
  PackedKey operator[](std::size_t i) const { return keys_[i]; }

  bool contains(PackedKey key) const { return pos_.contains(key); }
  std::ptrdiff_t find(PackedKey key) const {
    auto it = pos_.find(key);
    return it == pos_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }
  // Returns the position of the key, inserting it at the end if absent.
  std::size_t insert(PackedKey key);
  void reserve(std::size_t n);
  // Sort into canonical order: by level sum, then packed value.
  void canonicalize();

 private:
  int d_ = 1;
  std::vector<PackedKey> keys_;
  absl::flat_hash_map<PackedKey, std::uint32_t> pos_;
};

class AdaptiveGrid {
 public:
  AdaptiveGrid(int d, int k, int M, int N_max);

  int d() const { return d_; }
  int k() const { return k_; }
  int M() const { return M_; }
  int N_max() const { return N_max_; }
  int block_size() const;  // (k+1)^d
  std::size_t size() const { return active_.size(); }
  std::size_t dof() const { return size() * static_cast<std::size_t>(block_size()); }

  const IndexSet& active() const { return active_; }
  const std::vector<PackedKey>& keys() const { return active_.keys(); }
  bool contains(PackedKey key) const { return active_.contains(key); }
  std::ptrdiff_t find(PackedKey key) const { return active_.find(key); }

  // Adds the key and any missing ancestors. Returns false if the key was already active.
  bool insert_closed(PackedKey key);
  // Removes a leaf; rejects the root and keys with active children.
  void remove_leaf(PackedKey key);
  bool is_leaf(PackedKey key) const;
  // Keeps the keys with keep[pos] set, in their current order. The root must stay.
  void retain(const std::vector<char>& keep);
  bool is_downward_closed() const;
  void canonicalize() { active_.canonicalize(); }

  // "l_1 .. l_d j_1 .. j_d cx_1 .. cx_d" per element.
  std::string dump_centers() const;

 private:
  int d_, k_, M_, N_max_;
  IndexSet active_;
};

AdaptiveGrid build_sparse_grid(int d, int k, int N, int M = -1);
AdaptiveGrid build_full_grid(int d, int k, int N, int M = -1, std::size_t max_coefficients = std::size_t{1} << 26);

}  // namespace mwdg
