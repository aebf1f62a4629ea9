#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mwdg/alpert.hpp"
#include "mwdg/interp.hpp"

namespace mwdg {

enum class OpKind {
  Identity,
  Mass,
  Stiffness,
  VolumeDerivative,
  TraceAverage,
  TraceJump,
  Penalty,
  CrossMass,
  CrossDerivative,
  CrossTrace,
  PointEval,
  Hierarchize,
  Composite,
};

// With respect to level ordering: row-level vs col-level of every nonzero block.
enum class Triangularity { Lower, StrictlyLower, Upper, StrictlyUpper, General };

enum class BoundaryType { Periodic, Dirichlet, Neumann };

BoundaryType parse_boundary(const std::string& s);
std::string to_string(BoundaryType b);

struct Boundary1D {
  BoundaryType low = BoundaryType::Periodic;
  BoundaryType high = BoundaryType::Periodic;
};

// One-sided trace combinations at a face with left state L and right state R.
// Interior: Jump = L - R, Average = (L + R)/2, HalfLeft = L/2, HalfRight = R/2.
// On a boundary face the missing side is zero and the halves carry full weight.
enum class Trace { Jump, Average, HalfLeft, HalfRight };

// Dense 1D matrix over hierarchical indices 0..2^N-1 with p_out x p_in blocks.
class Operator1D {
 public:
  struct BlockRef {
    int other;   // in-index for row lists, out-index for column lists
    int offset;  // start of the p_out x p_in row-major block in block storage
  };

  Operator1D(OpKind kind, int N, int p_out, int p_in, Eigen::MatrixXd A);
  static Operator1D identity(int N, int p);

  OpKind kind() const { return kind_; }
  int N() const { return N_; }
  int n() const { return 1 << N_; }
  int p_out() const { return p_out_; }
  int p_in() const { return p_in_; }
  bool is_identity() const { return identity_; }
  Triangularity triangularity() const { return tri_; }
  Eigen::MatrixXd dense() const;

  const std::vector<BlockRef>& row(int out) const { return rows_[out]; }
  const std::vector<BlockRef>& col(int in) const { return cols_[in]; }
  const double* block(int offset) const { return blocks_.data() + offset; }
  std::size_t block_count() const;

 private:
  OpKind kind_;
  int N_, p_out_, p_in_;
  bool identity_ = false;
  Triangularity tri_ = Triangularity::General;
  Eigen::MatrixXd A_;
  std::vector<double> blocks_;
  std::vector<std::vector<BlockRef>> rows_, cols_;
};

using OpPtr = std::shared_ptr<const Operator1D>;

// L holds blocks with row-level >= col-level, U the rest; L + U = op.
std::pair<Operator1D, Operator1D> lu_split(const Operator1D& op);

Eigen::MatrixXd assemble_volume(const Basis1D& rows, int row_der, const Basis1D& cols, int col_der, int N);
Eigen::MatrixXd assemble_trace(const Basis1D& rows, Trace row_trace, int row_der, const Basis1D& cols,
                               Trace col_trace, int col_der, int N, Boundary1D bc);
// Rows: interpolation points of `points`; columns: functions of `cols`.
Eigen::MatrixXd assemble_point_eval(const InterpBasis1D& points, const Basis1D& cols, int der, int N);
// Inverse of the unit lower-triangular point-evaluation matrix of the interpolatory basis.
Eigen::MatrixXd assemble_hierarchize(const InterpBasis1D& basis, int N);

Operator1D assemble_mass(const Basis1D& rows, const Basis1D& cols, int N);
Operator1D assemble_volume_derivative(const Basis1D& rows, const Basis1D& cols, int N);
enum class TraceKind { AverageOfDerivative, JumpOfValue, Penalty };
Operator1D assemble_trace(const Basis1D& rows, const Basis1D& cols, int N, TraceKind kind, Boundary1D bc);
// Constant-coefficient 1D IPDG matrix: stiffness - average terms - transpose + (sigma/h) penalty.
Operator1D assemble_ipdg_1d(const AlpertBasis1D& basis, int N, double sigma_over_h, Boundary1D bc);

// Lazily assembled, cached 1D operators for one discretization.
class OperatorLibrary {
 public:
  OperatorLibrary(int k, int M, InterpVariant variant, int N);

  int N() const { return N_; }
  const AlpertBasis1D& alpert() const { return alpert_; }
  const InterpBasis1D& interp() const { return interp_; }

  OpPtr identity_alpert() const;
  OpPtr identity_interp() const;
  OpPtr ipdg(Boundary1D bc, double sigma_over_h) const;
  OpPtr penalty(Boundary1D bc) const;
  // Broken H1 seminorm plus h-scaled derivative averages and 1/h-scaled jumps, h = 2^-N.
  OpPtr energy(Boundary1D bc) const;
  // -D + Tavg: volume and average terms tested against Alpert, interpolatory trial.
  OpPtr cross_volume(Boundary1D bc) const;
  OpPtr cross_jump(Boundary1D bc, Trace test_side) const;
  OpPtr cross_mass() const;
  OpPtr point_eval(int der) const;
  OpPtr hierarchize() const;

 private:
  OpPtr cached(const std::string& key, const std::function<Operator1D()>& build) const;

  int N_;
  AlpertBasis1D alpert_;
  InterpBasis1D interp_;
  mutable std::mutex mu_;
  mutable std::map<std::string, OpPtr> cache_;
};

}  // namespace mwdg
