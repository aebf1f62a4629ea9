#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "mwdg/grid.hpp"
#include "mwdg/operators1d.hpp"

namespace mwdg {

using Coeffs = std::vector<double>;

// Level predicate; admissible keys satisfy H(levels) <= 0.
using ConstraintFn = std::function<int(const MultiLevel&)>;

// All keys with |l|_inf <= N admitted by H.
IndexSet constraint_set(int d, int N, const ConstraintFn& H);

enum class SweepRole { Identity, Upper, General, Lower };

// Sum of tensor products of 1D operators, expanded into L+U split terms
// with at most one general factor each.
class TensorOperator {
 public:
  struct Term {
    std::array<OpPtr, kMaxDim> factor{};
    std::array<SweepRole, kMaxDim> role{};
    double scale = 1.0;
  };

  explicit TensorOperator(int d) : d_(d) {}
  void add(const std::array<OpPtr, kMaxDim>& factors, double scale = 1.0);

  int d() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::array<int, kMaxDim> p_in() const { return p_in_; }
  std::array<int, kMaxDim> p_out() const { return p_out_; }
  int block_in() const;
  int block_out() const;

 private:
  int d_;
  bool shaped_ = false;
  std::array<int, kMaxDim> p_in_{}, p_out_{};
  std::vector<Term> terms_;
};

struct OpCounter {
  std::uint64_t flops = 0;
};

Coeffs fast_apply(const TensorOperator& op, const IndexSet& in, const Coeffs& x, const IndexSet& out,
                  OpCounter* counter = nullptr);
Coeffs fast_apply(const TensorOperator& op, const IndexSet& in, const Coeffs& x, int N, const ConstraintFn& H,
                  OpCounter* counter = nullptr);

// Same factor in every dimension.
TensorOperator tensor_power(int d, const OpPtr& op);

// Alpert coefficients of the function represented by interpolation surpluses.
Coeffs surplus_to_alpert(const Coeffs& surpluses, const AdaptiveGrid& grid, const OperatorLibrary& lib);
// Values of u_h at all owned interpolation points; der_dim >= 0 differentiates in that dimension.
Coeffs alpert_to_point_values(const Coeffs& coeffs, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                              int der_dim = -1);
// Surpluses from values at the owned interpolation points.
Coeffs values_to_surplus(const Coeffs& values, const AdaptiveGrid& grid, const OperatorLibrary& lib);

}  // namespace mwdg
