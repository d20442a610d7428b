#pragma once

// Dense complex Hermitian linear algebra for multi-system operators:
// tensor products with explicit factor reordering, partial traces,
// spectral decompositions, support projectors.
//
// Every multi-system operator carries its tensor-factor signature so
// subsystem reorderings are always explicit.  Basis ordering is row-major
// throughout: the flat index of factor tuple (a, b) in A (x) B is a*d_B + b.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zerocap/errors.hpp"

namespace zerocap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Dims = std::vector<int>;

// ----------------------------- HermitianMatrix ------------------------------

// Immutable after construction.  Construction hermitizes (X + X^dag)/2 and
// rejects inputs whose relative asymmetry exceeds 1e-9: solver round-off is
// tolerated, genuinely non-Hermitian input is not.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // factors defaults to {dim}; their product must equal the matrix dimension.
  static HermitianMatrix from(const CMatrix& m, Dims factors = {});
  static HermitianMatrix identity(Dims factors);
  static HermitianMatrix zero(Dims factors);

  const CMatrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  const Dims& factors() const { return factors_; }

  // Same entries, new factor signature (product must match dim).
  HermitianMatrix with_factors(Dims factors) const;

  double trace() const { return mat_.trace().real(); }
  double norm() const { return mat_.norm(); }

 private:
  HermitianMatrix(CMatrix m, Dims f) : mat_(std::move(m)), factors_(std::move(f)) {}
  CMatrix mat_;
  Dims factors_;
};

// ------------------------------- operations ---------------------------------

// Tensor product of ops with the factors of the result permuted to `order`.
// `order[p] = q` places input factor q at position p of the result; order is
// a permutation of indices into the concatenated factor list of ops.
HermitianMatrix kron_perm(const std::vector<HermitianMatrix>& ops, const Dims& order);

// Trace over the complement of `keep` (indices into x.factors(); the kept
// factors retain their original relative order).
HermitianMatrix partial_trace(const HermitianMatrix& x, const Dims& keep);

// Projector onto the span of eigenvectors with eigenvalue > tol * lambda_max.
// tol < 0 selects the default scale-free cutoff 1e-9.  Throws if x has an
// eigenvalue below -tol_abs (not PSD).
HermitianMatrix support_projector(const HermitianMatrix& x, double tol = -1.0);

struct Spectrum {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns
  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
};

Spectrum spectrum(const HermitianMatrix& x);
double min_eigenvalue(const HermitianMatrix& x);
double max_eigenvalue(const HermitianMatrix& x);

// ------------------------- raw-matrix building blocks -----------------------
// These operate on plain Eigen matrices; the HermitianMatrix operations above
// are thin wrappers that also maintain the factor signatures.

CMatrix kron(const CMatrix& a, const CMatrix& b);

// |i><j| in d dimensions.
CMatrix matrix_unit(int d, int i, int j);

// Unnormalized maximally entangled vector sum_k |k>|k> and its rank-1 operator.
CVector max_entangled_vec(int d);
CMatrix max_entangled(int d);

// Orthonormal Hermitian operator basis of L(C^d) under <A,B> = tr(A^dag B):
// d diagonal units, then symmetric and antisymmetric pair combinations.
std::vector<CMatrix> hermitian_basis(int d);

// Same with the identity direction removed (d^2 - 1 traceless elements).
std::vector<CMatrix> traceless_hermitian_basis(int d);

// Permute the tensor factors of a square matrix (see kron_perm for the
// meaning of `order`); returns the reordered matrix.
CMatrix permute_factors(const CMatrix& m, const Dims& factors, const Dims& order);

// Partial trace on a raw matrix.
CMatrix partial_trace_raw(const CMatrix& m, const Dims& factors, const Dims& keep);

// Gram-Schmidt orthonormalization under the Hilbert-Schmidt inner product;
// near-dependent elements (residual norm <= tol) are dropped.
std::vector<CMatrix> orthonormalize(const std::vector<CMatrix>& ops, double tol = 1e-10);

// N(rho) = tr_in[ J (rho^T (x) 1_out) ] for a Choi matrix J on in (x) out.
CMatrix apply_choi(const CMatrix& choi, int d_in, int d_out, const CMatrix& rho);

inline double hs_dot(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace zerocap
