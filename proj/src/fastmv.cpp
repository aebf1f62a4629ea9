#include "mwdg/fastmv.hpp"

#include <functional>
#include <map>
#include <mutex>

#include "mwdg/error.hpp"

namespace mwdg {

IndexSet constraint_set(int d, int N, const ConstraintFn& H) {
  IndexSet out(d);
  MultiLevel ml;
  ml.d = d;
  std::function<void(int, PackedKey)> rec = [&](int m, PackedKey key) {
    if (m == d) {
      if (H(ml) <= 0) out.insert(key);
      return;
    }
    for (int l = 0; l <= N; ++l) {
      ml.l[m] = l;
      for (int j = 0; j < cells_at_level(l); ++j) rec(m + 1, with_index(key, m, index_of(l, j)));
    }
  };
  rec(0, 0);
  out.canonicalize();
  return out;
}

namespace {

struct SplitParts {
  OpPtr lower, upper;
};

// L+U parts of general factors, cached per operator instance.
SplitParts split_cached(const OpPtr& op) {
  static std::mutex mu;
  static std::map<const Operator1D*, std::pair<OpPtr, SplitParts>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(op.get()); it != cache.end() && it->second.first == op) return it->second.second;
  auto [L, U] = lu_split(*op);
  SplitParts parts{std::make_shared<const Operator1D>(std::move(L)), std::make_shared<const Operator1D>(std::move(U))};
  cache[op.get()] = {op, parts};
  return parts;
}

SweepRole role_of(const Operator1D& op) {
  if (op.is_identity()) return SweepRole::Identity;
  switch (op.triangularity()) {
    case Triangularity::Lower:
    case Triangularity::StrictlyLower: return SweepRole::Lower;
    case Triangularity::Upper:
    case Triangularity::StrictlyUpper: return SweepRole::Upper;
    case Triangularity::General: return SweepRole::General;
  }
  return SweepRole::General;
}

}  // namespace

int TensorOperator::block_in() const {
  int b = 1;
  for (int m = 0; m < d_; ++m) b *= p_in_[m];
  return b;
}

int TensorOperator::block_out() const {
  int b = 1;
  for (int m = 0; m < d_; ++m) b *= p_out_[m];
  return b;
}

void TensorOperator::add(const std::array<OpPtr, kMaxDim>& factors, double scale) {
  for (int m = 0; m < d_; ++m) {
    require(factors[m] != nullptr, ErrorCode::InvalidArgument, "missing tensor factor");
    if (shaped_) {
      require(factors[m]->p_in() == p_in_[m] && factors[m]->p_out() == p_out_[m], ErrorCode::InvalidArgument,
              "tensor factor block sizes differ between terms");
    }
  }
  if (!shaped_) {
    for (int m = 0; m < d_; ++m) {
      p_in_[m] = factors[m]->p_in();
      p_out_[m] = factors[m]->p_out();
    }
    shaped_ = true;
  }
  std::vector<Term> expanded(1);
  expanded[0].scale = scale;
  bool kept_general = false;
  for (int m = 0; m < d_; ++m) {
    const SweepRole r = role_of(*factors[m]);
    if (r != SweepRole::General || !kept_general) {
      kept_general |= r == SweepRole::General;
      for (Term& t : expanded) {
        t.factor[m] = factors[m];
        t.role[m] = r;
      }
      continue;
    }
    const SplitParts parts = split_cached(factors[m]);
    std::vector<Term> next;
    for (const Term& t : expanded) {
      Term lo = t, up = t;
      lo.factor[m] = parts.lower;
      lo.role[m] = SweepRole::Lower;
      up.factor[m] = parts.upper;
      up.role[m] = SweepRole::Upper;
      next.push_back(lo);
      next.push_back(up);
    }
    expanded = std::move(next);
  }
  for (Term& t : expanded) {
    int general = 0;
    for (int m = 0; m < d_; ++m) general += t.role[m] == SweepRole::General;
    require(general <= 1, ErrorCode::Internal, "split term has more than one general factor");
    terms_.push_back(std::move(t));
  }
}

namespace {

struct Work {
  std::array<int, kMaxDim> ext{};
  int bs = 1;
  IndexSet keys;
  std::vector<double> data;

  void set_ext(const std::array<int, kMaxDim>& e, int d) {
    ext = e;
    bs = 1;
    for (int m = 0; m < d; ++m) bs *= ext[m];
  }
  double* at(std::size_t pos) { return data.data() + pos * bs; }
  const double* at(std::size_t pos) const { return data.data() + pos * bs; }
  std::size_t insert(PackedKey key) {
    const std::size_t n = keys.size();
    const std::size_t pos = keys.insert(key);
    if (pos == n) data.resize(data.size() + bs, 0.0);
    return pos;
  }
};

// dst += B (p_out x p_in) applied along dimension m of a block with extents ext (ext[m] = p_in).
inline void apply_block(const double* B, int p_out, int p_in, int m, int d, const std::array<int, kMaxDim>& ext,
                        const double* src, double* dst, OpCounter* counter) {
  int pre = 1, post = 1;
  for (int i = 0; i < m; ++i) pre *= ext[i];
  for (int i = m + 1; i < d; ++i) post *= ext[i];
  for (int a0 = 0; a0 < pre; ++a0) {
    const double* s = src + a0 * p_in * post;
    double* t = dst + a0 * p_out * post;
    for (int a = 0; a < p_out; ++a) {
      const double* Brow = B + a * p_in;
      double* trow = t + a * post;
      for (int b = 0; b < p_in; ++b) {
        const double c = Brow[b];
        if (c == 0.0) continue;
        const double* srow = s + b * post;
        for (int q = 0; q < post; ++q) trow[q] += c * srow[q];
      }
    }
  }
  if (counter) counter->flops += static_cast<std::uint64_t>(pre) * p_out * p_in * post;
}

Work scatter(const Work& src, const Operator1D& A, int m, int d, OpCounter* counter) {
  Work out;
  std::array<int, kMaxDim> ext = src.ext;
  ext[m] = A.p_out();
  out.set_ext(ext, d);
  out.keys = IndexSet(d);
  for (std::size_t s = 0; s < src.keys.size(); ++s) {
    const PackedKey key = src.keys[s];
    for (const auto& br : A.col(key_index(key, m))) {
      const std::size_t pos = out.insert(with_index(key, m, br.other));
      apply_block(A.block(br.offset), A.p_out(), A.p_in(), m, d, src.ext, src.at(s), out.at(pos), counter);
    }
  }
  return out;
}

Work gather(const Work& src, const Operator1D& A, int m, int d, const IndexSet& targets, OpCounter* counter) {
  Work out;
  std::array<int, kMaxDim> ext = src.ext;
  ext[m] = A.p_out();
  out.set_ext(ext, d);
  out.keys = targets;
  out.data.assign(targets.size() * out.bs, 0.0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const PackedKey key = targets[t];
    for (const auto& br : A.row(key_index(key, m))) {
      const std::ptrdiff_t s = src.keys.find(with_index(key, m, br.other));
      if (s < 0) continue;
      apply_block(A.block(br.offset), A.p_out(), A.p_in(), m, d, src.ext, src.at(s), out.at(t), counter);
    }
  }
  return out;
}

IndexSet preimage(const IndexSet& targets, const Operator1D& A, int m, int d) {
  IndexSet out(d);
  out.reserve(targets.size() * 2);
  for (PackedKey key : targets.keys())
    for (const auto& br : A.row(key_index(key, m))) out.insert(with_index(key, m, br.other));
  return out;
}

}  // namespace

Coeffs fast_apply(const TensorOperator& op, const IndexSet& in, const Coeffs& x, const IndexSet& out,
                  OpCounter* counter) {
  const int d = op.d();
  require(in.d() == d && out.d() == d, ErrorCode::InvalidArgument, "index set dimension mismatch");
  require(x.size() == in.size() * static_cast<std::size_t>(op.block_in()), ErrorCode::InvalidArgument,
          "input size does not match index set");
  const int bo = op.block_out();
  Coeffs y(out.size() * bo, 0.0);

  Work input;
  input.set_ext(op.p_in(), d);
  input.keys = in;
  input.data = x;

  for (const auto& term : op.terms()) {
    std::vector<int> upper, lower;
    int general = -1;
    for (int m = 0; m < d; ++m) {
      switch (term.role[m]) {
        case SweepRole::Upper: upper.push_back(m); break;
        case SweepRole::Lower: lower.push_back(m); break;
        case SweepRole::General: general = m; break;
        case SweepRole::Identity: break;
      }
    }
    std::vector<int> gathers;
    if (general >= 0) gathers.push_back(general);
    gathers.insert(gathers.end(), lower.begin(), lower.end());

    // Targets of each gather stage, propagated back from the output set.
    std::vector<IndexSet> targets(gathers.size());
    if (!gathers.empty()) {
      targets.back() = out;
      for (std::size_t g = gathers.size() - 1; g > 0; --g)
        targets[g - 1] = preimage(targets[g], *term.factor[gathers[g]], gathers[g], d);
    }

    const Work* cur = &input;
    Work a, b;
    bool use_a = true;
    auto advance = [&](Work&& w) {
      Work& slot = use_a ? a : b;
      slot = std::move(w);
      cur = &slot;
      use_a = !use_a;
    };
    for (int m : upper) advance(scatter(*cur, *term.factor[m], m, d, counter));
    for (std::size_t g = 0; g < gathers.size(); ++g)
      advance(gather(*cur, *term.factor[gathers[g]], gathers[g], d, targets[g], counter));

    if (gathers.empty()) {
      for (std::size_t t = 0; t < out.size(); ++t) {
        const std::ptrdiff_t s = cur->keys.find(out[t]);
        if (s < 0) continue;
        const double* src = cur->at(s);
        for (int i = 0; i < bo; ++i) y[t * bo + i] += term.scale * src[i];
      }
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += term.scale * cur->data[i];
    }
  }
  return y;
}

Coeffs fast_apply(const TensorOperator& op, const IndexSet& in, const Coeffs& x, int N, const ConstraintFn& H,
                  OpCounter* counter) {
  return fast_apply(op, in, x, constraint_set(op.d(), N, H), counter);
}

TensorOperator tensor_power(int d, const OpPtr& op) {
  TensorOperator t(d);
  std::array<OpPtr, kMaxDim> f{};
  for (int m = 0; m < d; ++m) f[m] = op;
  t.add(f);
  return t;
}

Coeffs surplus_to_alpert(const Coeffs& surpluses, const AdaptiveGrid& grid, const OperatorLibrary& lib) {
  return fast_apply(tensor_power(grid.d(), lib.cross_mass()), grid.active(), surpluses, grid.active());
}

Coeffs alpert_to_point_values(const Coeffs& coeffs, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                              int der_dim) {
  TensorOperator t(grid.d());
  std::array<OpPtr, kMaxDim> f{};
  for (int m = 0; m < grid.d(); ++m) f[m] = lib.point_eval(m == der_dim ? 1 : 0);
  t.add(f);
  return fast_apply(t, grid.active(), coeffs, grid.active());
}

Coeffs values_to_surplus(const Coeffs& values, const AdaptiveGrid& grid, const OperatorLibrary& lib) {
  return fast_apply(tensor_power(grid.d(), lib.hierarchize()), grid.active(), values, grid.active());
}

}  // namespace mwdg
