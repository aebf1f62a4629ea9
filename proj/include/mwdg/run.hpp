#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mwdg/adapt.hpp"
#include "mwdg/config.hpp"
#include "mwdg/diagnostics.hpp"
#include "mwdg/problems.hpp"

namespace mwdg {

enum class GridMode { Sparse, Full, Adaptive };

GridMode parse_mode(const std::string& s);
std::string to_string(GridMode m);

struct RunOptions {
  ProblemParams problem;
  GridMode mode = GridMode::Sparse;
  int N = 5;
  double epsilon = 1e-3;
  double eta = -1;
  std::optional<RKScheme> scheme;
  bool interpolate_init = false;
  int init_level = 2;
  std::vector<double> snapshot_times;
  int slice_points = 64;
  double slice_x3 = 0.5;
  std::vector<double> cut_at;  // per dimension; default 0.5
  int linf_points = 0;         // 0: min(2^(N+1), 128) when an L-infinity error is reported
  std::size_t memory_cap = std::size_t{1} << 26;
  std::string sweep_param;
  std::vector<double> sweep_values;

  static RunOptions from_config(const Config& c);
  RKScheme resolved_scheme() const { return scheme ? *scheme : default_scheme(problem.k); }
  // Resolved configuration as '#'-prefixed lines.
  std::string echo() const;
};

// Owns the problem, grid and state of one run.
class Solver {
 public:
  explicit Solver(const RunOptions& opts);

  const RunOptions& options() const { return opts_; }
  const ProblemSpec& spec() const { return op_->spec(); }
  const SpatialOperator& op() const { return *op_; }
  const OperatorLibrary& lib() const { return *lib_; }
  const AdaptiveGrid& grid() const { return *grid_; }
  const StateVector& state() const { return state_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }

  // One step of size min(dt, limit - t).
  void step(double limit);
  void advance_to(double t_target);

  bool has_l2() const;
  double l2_error() const;
  bool has_point_exact() const;
  double linf_error(int n) const;
  double energy() const;
  double solution_norm() const;

 private:
  void initialize();
  Coeffs initial_field(const SeparableSum& f) const;

  RunOptions opts_;
  std::shared_ptr<const OperatorLibrary> lib_;
  std::unique_ptr<SpatialOperator> op_;
  std::unique_ptr<AdaptiveGrid> grid_;
  StateVector state_;
  AdaptParams adapt_;
  double t_ = 0, dt_ = 0;
  int steps_ = 0;
};

struct RunResult {
  RunRecord record;
  double l2_error = -1;
  double linf_error = -1;
  std::size_t dof = 0;
  double solution_norm = 0;
  int steps = 0;
  double dt = 0;
};

// Empty out_dir: no files.
RunResult run(const RunOptions& opts, const std::string& out_dir);

struct SweepResult {
  std::vector<TableRow> rows;
  TableKind kind = TableKind::Mesh;
  std::vector<RunResult> runs;
  std::string csv;
};

SweepResult convergence_study(const RunOptions& opts, const std::string& out_dir);

}  // namespace mwdg
