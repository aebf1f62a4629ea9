#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mwdg/timestep.hpp"

namespace mwdg {

// 1/2 |w_h|^2 + 1/2 B(u_h, u_h).
double discrete_energy(const StateVector& state, const SpatialOperator& op, const AdaptiveGrid& grid);

// L2 error against the spec's exact solution at time t.
double l2_error(const Coeffs& u, const ProblemSpec& spec, const AdaptiveGrid& grid, const OperatorLibrary& lib,
                double t);
// Integral of f^2 over the unit cube for a separable sum.
double separable_norm2(const SeparableSum& f, int d, double t);

// Values of u_h on the tensor lattice x_i = (i + 1/2)/n (or the given 1D coordinates per dimension).
class LatticeEvaluator {
 public:
  LatticeEvaluator(const AdaptiveGrid& grid, const AlpertBasis1D& basis, std::array<std::vector<double>, kMaxDim> axes);
  static std::array<std::vector<double>, kMaxDim> uniform_axes(int d, int n);

  // Row-major with dimension 0 slowest.
  std::vector<double> evaluate(const Coeffs& u) const;
  const std::array<std::vector<double>, kMaxDim>& axes() const { return axes_; }
  std::size_t size() const;

 private:
  const AdaptiveGrid& grid_;
  const AlpertBasis1D& basis_;
  std::array<std::vector<double>, kMaxDim> axes_;
  // [dim][idx] -> first lattice point and p x count values.
  std::array<std::vector<std::pair<int, std::vector<double>>>, kMaxDim> tables_;
};

// max |u_h - u| over a uniform lattice with n points per dimension.
double sampled_linf_error(const Coeffs& u, const ProblemSpec& spec, const AdaptiveGrid& grid,
                          const OperatorLibrary& lib, double t, int n);

struct TableRow {
  double param = 0;  // N or epsilon
  std::size_t dof = 0;
  double error = 0;
  double order = 0, r_dof = 0, r_eps = 0;
  bool has_rate = false;
};

enum class TableKind { Mesh, Epsilon };

// Fills order / R_DoF / R_eps from successive rows.
void convergence_rates(std::vector<TableRow>& rows, TableKind kind);
std::string format_table(const std::vector<TableRow>& rows, TableKind kind);

struct RecordRow {
  double t = 0;
  std::size_t dof = 0;
  double l2_error = -1;  // negative: no exact solution
  double energy = 0;
  double wall_time = 0;
};

struct RunRecord {
  std::vector<RecordRow> rows;
  std::string config_echo;  // '#'-prefixed lines
  bool aborted = false;
  std::string abort_reason;
  int abort_step = -1;
  double max_abs_coefficient = 0;

  const RecordRow& final() const { return rows.back(); }
  // Wall-clock times are excluded by default so repeated runs write identical files.
  std::string to_csv(bool with_wall_time = false) const;
};

std::string format_g6(double v);

}  // namespace mwdg
