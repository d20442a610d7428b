#pragma once

// Block-diagonal Hermitian semidefinite programs with linear equality
// constraints, solved by an embedded primal-dual interior-point method on
// the homogeneous self-dual embedding.  Diagonal blocks double as the LP
// path.  Complex Hermitian blocks of dimension d are compiled into real
// symmetric blocks of dimension 2d via [[Re, -Im], [Im, Re]], with objective
// and constraint coefficients rescaled so reported values equal the
// complex-domain values.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "zerocap/matcore.hpp"

namespace zerocap {

enum class BlockKind { hermitian, diagonal };

enum class SdpStatus { optimal, infeasible, unbounded, max_iter, numerical };

std::string to_string(SdpStatus s);

// ------------------------------- SdpProblem ---------------------------------

// Equality standard form over PSD blocks:
//   optimize  sum_b <C_b, X_b>    s.t.  sum_b <A_ib, X_b> = rhs_i,  X_b >= 0.
// Every inequality of a source formulation must be converted to an equality
// plus a PSD slack block before reaching this type.
class SdpProblem {
 public:
  int add_block(std::string label, int dim, BlockKind kind);

  // Objective coefficient for one block (Hermitian; for diagonal blocks only
  // the real diagonal is read).  Defaults to zero.
  void set_objective(int block, const CMatrix& coeff);
  void set_maximize(bool maximize) { maximize_ = maximize; }

  // One scalar equality sum_b <coeff_b, X_b> = rhs.
  void add_equality(const std::vector<std::pair<int, CMatrix>>& terms, double rhs);

  // Operator equality sum_b L_b(X_b) = rhs over a target space of dimension
  // target_dim.  Each term supplies the adjoint of its map: given a Hermitian
  // basis element h of the target space it returns the block coefficient
  // L_b^*(h).  Expands into target_dim^2 scalar equalities.
  using AdjointFn = std::function<CMatrix(const CMatrix&)>;
  void add_operator_equality(const std::vector<std::pair<int, AdjointFn>>& terms,
                             const CMatrix& rhs, int target_dim);

  struct Block {
    std::string label;
    int dim;
    BlockKind kind;
  };
  struct Equality {
    std::vector<std::pair<int, CMatrix>> terms;
    double rhs;
  };

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Equality>& equalities() const { return equalities_; }
  const std::vector<CMatrix>& objective() const { return objective_; }
  bool maximize() const { return maximize_; }

 private:
  std::vector<Block> blocks_;
  std::vector<CMatrix> objective_;
  std::vector<Equality> equalities_;
  bool maximize_ = false;
};

// ------------------------------- SdpSolution ---------------------------------

struct SdpResiduals {
  double primal = 0.0;  // ||A(X) - b|| / (1 + ||b||)
  double dual = 0.0;    // ||A*(y) + S - C|| / (1 + ||C||)
  double gap = 0.0;     // |primal - dual| / (1 + |primal|)
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical;
  double primal_value = 0.0;
  double dual_value = 0.0;
  std::vector<CMatrix> X;  // per-block PSD witnesses, complex domain
  std::vector<double> y;   // equality multipliers
  std::vector<CMatrix> S;  // dual slacks, complex domain
  SdpResiduals residuals;
  int iterations = 0;

  bool ok() const { return status == SdpStatus::optimal; }
};

// Snap a value to the nearest integer when within tol; otherwise identity.
// Keeps round-off from flipping the integer part / ceiling of SDP optima.
double snap_integer(double value, double tol = 1e-6);

// -------------------------------- solving -----------------------------------

struct SolveOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
  // Test seam: called once per iteration with (pobj, dobj, gap residual).
  std::function<void(int iter, double pobj, double dobj, double rgap)> trace;
};

// Compiled real standard form.  Rows are pruned to a maximal linearly
// independent set; the solution is checked against the full set afterwards.
struct CompiledSdp {
  struct RBlock {
    int dim = 0;           // real dimension (2d for Hermitian d, d for diagonal)
    bool diagonal = false;
    // Constraints touching this block: row index and real coefficient.
    std::vector<int> rows;
    std::vector<RMatrix> coeff;      // symmetric, for matrix blocks
    std::vector<RVector> diag_coeff; // for diagonal blocks
    RMatrix c;                       // objective coefficient
    RVector c_diag;
  };
  std::vector<RBlock> blocks;
  RVector b;                  // pruned right-hand side
  std::vector<int> kept_rows; // indices into the original equality list
  int total_rows = 0;         // before pruning
  double obj_sign = 1.0;      // -1 when the source problem maximizes
};

CompiledSdp compile(const SdpProblem& problem);

// Plain-text sparse dump of a compiled problem, one line per nonzero:
//   c <block> <row> <col> <value>     objective entries
//   A <eq> <block> <row> <col> <value> constraint entries
//   b <eq> <value>                     right-hand sides
void dump(const CompiledSdp& compiled, std::ostream& os);

SdpSolution solve(const SdpProblem& problem, const SolveOptions& opts = {});

}  // namespace zerocap
