#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mwdg/fastmv.hpp"
#include "mwdg/grid.hpp"
#include "mwdg/operators1d.hpp"

namespace mwdg {

// f(x, sides) with one-sided limits per dimension.
using PointFn = std::function<double(const double* x, const int* sides)>;

// T(t) * prod_m X_m(x_m).
struct SeparableTerm {
  std::function<double(double)> time;
  std::array<Fn1D, kMaxDim> factor;
};
using SeparableSum = std::vector<SeparableTerm>;

double evaluate(const SeparableSum& f, int d, const double* x, double t);

enum class SpeedKind { Constant, Smooth, Interface };

struct WaveSpeedField {
  SpeedKind kind = SpeedKind::Constant;
  double value = 1.0;  // c^2 for the constant kind
  PointFn c2;          // smooth and interface kinds
  double c2_min = 1.0, c2_max = 1.0;
  // Interface kind: jump locations per dimension, which must be finest-mesh faces.
  std::array<std::vector<double>, kMaxDim> jumps;

  double operator()(const double* x, const int* sides) const { return kind == SpeedKind::Constant ? value : c2(x, sides); }
};

struct ProblemSpec {
  std::string name = "custom";
  int d = 2;
  int k = 1;
  int M = 2;
  InterpVariant variant = InterpVariant::Interface;
  int N_max = 8;
  double sigma = 10.0;
  double cfl = 0.1;
  double T = 0.1;
  WaveSpeedField speed;
  SeparableSum source;
  std::array<Boundary1D, kMaxDim> bc{};
  // Dirichlet data is the trace of this function; empty means homogeneous.
  SeparableSum dirichlet;
  SeparableSum u0, v0;
  SeparableSum exact;
  std::function<double(const double*, double)> exact_point;
  std::function<double(double)> exact_norm2;
  double epsilon = 0.0;

  bool has_exact() const { return !exact.empty() || static_cast<bool>(exact_point); }
  double exact_at(const double* x, double t) const;
  void validate() const;
};

// The semi-discrete spatial operator L_h and the load functional.
class SpatialOperator {
 public:
  SpatialOperator(ProblemSpec spec, std::shared_ptr<const OperatorLibrary> lib);

  const ProblemSpec& spec() const { return spec_; }
  const OperatorLibrary& lib() const { return *lib_; }
  std::shared_ptr<const OperatorLibrary> lib_ptr() const { return lib_; }
  double sigma_over_h() const;

  // r with <r, v> = -B~(u, v) for every v in the active space.
  Coeffs apply(const Coeffs& u, const AdaptiveGrid& grid) const;
  // Coefficients of L(v) at time t.
  Coeffs source(const AdaptiveGrid& grid, double t) const;
  // B(u, v) (constant kind) or B~(u, v).
  double bilinear(const Coeffs& u, const Coeffs& v, const AdaptiveGrid& grid) const;
  // Variable-coefficient L_h from given surpluses: g[m] of c^2 d_m u, and the jump products per dimension.
  // An empty h_right means a continuous c^2 with h_left[m] the surpluses of c^2 u.
  Coeffs apply_from_surpluses(const std::vector<Coeffs>& g, const std::vector<Coeffs>& h_left,
                              const std::vector<Coeffs>& h_right, const Coeffs& u, const AdaptiveGrid& grid) const;

  // Raises if c^2 leaves [C_*, C^*] at the given point values.
  void check_bounds(const Coeffs& c2_values) const;

 private:
  struct Samples {
    std::vector<PackedKey> keys;
    Coeffs c2;
    std::vector<Coeffs> c2_left, c2_right;
  };
  std::shared_ptr<const Samples> samples(const AdaptiveGrid& grid) const;
  Coeffs apply_variable(const Coeffs& u, const AdaptiveGrid& grid) const;

  ProblemSpec spec_;
  std::shared_ptr<const OperatorLibrary> lib_;
  TensorOperator stiffness_;  // constant kind: sum_m S_m (x) I
  TensorOperator penalty_;    // sum_m P_m (x) I
  std::vector<TensorOperator> flux_ops_;                // per m: (Tavg - D)_m (x) X
  std::vector<TensorOperator> jump_left_, jump_right_;  // per m: one-sided trace halves (x) X
  std::vector<TensorOperator> jump_full_;               // per m: average trace (x) X
  struct SourcePiece {
    std::function<double(double)> time;
    std::array<std::vector<double>, kMaxDim> factor;  // 1D coefficient vectors
  };
  std::vector<SourcePiece> pieces_;
  mutable std::mutex cache_mu_;
  mutable std::shared_ptr<const Samples> cache_;
};

// Values of g at every owned interpolation point, with their sides; `force_dim`/`force_side` override one side.
Coeffs sample_at_points(const PointFn& g, const AdaptiveGrid& grid, const InterpBasis1D& basis, int force_dim = -1,
                        int force_side = 0);

// Surpluses of f on the grid's interpolation points.
Coeffs hierarchical_interpolate(const PointFn& f, const AdaptiveGrid& grid, const OperatorLibrary& lib);
// Surpluses of g * u_h sampled at the interpolation points.
Coeffs interpolate_pointwise_product(const Coeffs& field, const PointFn& g, const AdaptiveGrid& grid,
                                     const OperatorLibrary& lib);

Coeffs project_separable(const std::vector<Fn1D>& factors, const AdaptiveGrid& grid, const AlpertBasis1D& basis,
                         int quad_points = -1);
Coeffs project_separable(const SeparableSum& f, double t, const AdaptiveGrid& grid, const AlpertBasis1D& basis,
                         int quad_points = -1);

Coeffs apply_Lh(const Coeffs& u, const SpatialOperator& op, const AdaptiveGrid& grid);
Coeffs source_functional(const SpatialOperator& op, const AdaptiveGrid& grid, double t);
double bilinear_value(const Coeffs& u, const Coeffs& v, const SpatialOperator& op, const AdaptiveGrid& grid);
double energy_norm(const Coeffs& v, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                   const std::array<Boundary1D, kMaxDim>& bc);

}  // namespace mwdg
