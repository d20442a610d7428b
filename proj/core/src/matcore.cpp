#include "zerocap/matcore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace zerocap {

namespace {

int product(const Dims& f) {
  int p = 1;
  for (int d : f) p *= d;
  return p;
}

// Row-major strides: stride of the last factor is 1.
std::vector<int> strides(const Dims& f) {
  std::vector<int> s(f.size(), 1);
  for (int q = static_cast<int>(f.size()) - 2; q >= 0; --q) s[q] = s[q + 1] * f[q + 1];
  return s;
}

void check_factor_indices(const Dims& idx, std::size_t count, const char* what) {
  for (int q : idx) {
    if (q < 0 || q >= static_cast<int>(count)) {
      std::ostringstream os;
      os << what << ": factor index " << q << " out of range (have " << count << " factors)";
      throw spec_error(os.str());
    }
  }
}

}  // namespace

// ----------------------------- HermitianMatrix ------------------------------

HermitianMatrix HermitianMatrix::from(const CMatrix& m, Dims factors) {
  if (m.rows() != m.cols()) throw spec_error("HermitianMatrix: matrix is not square");
  const int d = static_cast<int>(m.rows());
  if (factors.empty()) factors = {d};
  if (product(factors) != d) {
    std::ostringstream os;
    os << "HermitianMatrix: factor product " << product(factors) << " != dim " << d;
    throw spec_error(os.str());
  }
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: input not Hermitian (relative asymmetry " << asym / scale << ")";
    throw spec_error(os.str());
  }
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()), std::move(factors));
}

HermitianMatrix HermitianMatrix::identity(Dims factors) {
  const int d = product(factors);
  return HermitianMatrix(CMatrix::Identity(d, d), std::move(factors));
}

HermitianMatrix HermitianMatrix::zero(Dims factors) {
  const int d = product(factors);
  return HermitianMatrix(CMatrix::Zero(d, d), std::move(factors));
}

HermitianMatrix HermitianMatrix::with_factors(Dims factors) const {
  if (product(factors) != dim()) {
    std::ostringstream os;
    os << "with_factors: factor product " << product(factors) << " != dim " << dim();
    throw spec_error(os.str());
  }
  return HermitianMatrix(mat_, std::move(factors));
}

// ------------------------- raw-matrix building blocks -----------------------

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix matrix_unit(int d, int i, int j) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

CVector max_entangled_vec(int d) {
  CVector v = CVector::Zero(d * d);
  for (int k = 0; k < d; ++k) v(k * d + k) = 1.0;
  return v;
}

CMatrix max_entangled(int d) {
  const CVector v = max_entangled_vec(d);
  return v * v.adjoint();
}

std::vector<CMatrix> hermitian_basis(int d) {
  std::vector<CMatrix> base;
  base.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) base.push_back(matrix_unit(d, i, i));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      base.push_back(inv_sqrt2 * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
      base.push_back(Complex(0.0, inv_sqrt2) * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
    }
  }
  return base;
}

std::vector<CMatrix> traceless_hermitian_basis(int d) {
  std::vector<CMatrix> base;
  base.reserve(static_cast<std::size_t>(d) * d - 1);
  // Diagonal differences diag(1,...,1,-k,0,...)/sqrt(k(k+1)) span the
  // traceless diagonals.
  for (int k = 1; k < d; ++k) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int i = 0; i < k; ++i) m(i, i) = 1.0;
    m(k, k) = -static_cast<double>(k);
    base.push_back(m / std::sqrt(static_cast<double>(k) * (k + 1)));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      base.push_back(inv_sqrt2 * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
      base.push_back(Complex(0.0, inv_sqrt2) * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
    }
  }
  return base;
}

CMatrix permute_factors(const CMatrix& m, const Dims& factors, const Dims& order) {
  const int dim = product(factors);
  if (m.rows() != dim || m.cols() != dim) throw spec_error("permute_factors: factors do not match matrix dimension");
  if (order.size() != factors.size()) throw spec_error("permute_factors: order length does not match factor count");
  check_factor_indices(order, factors.size(), "permute_factors");
  std::vector<bool> seen(factors.size(), false);
  for (int q : order) {
    if (seen[q]) {
      std::ostringstream os;
      os << "permute_factors: factor " << q << " appears twice in order";
      throw spec_error(os.str());
    }
    seen[q] = true;
  }

  const auto in_stride = strides(factors);
  Dims out_factors(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out_factors[p] = factors[order[p]];
  const auto out_stride = strides(out_factors);

  std::vector<int> map(dim);
  std::vector<int> digit(factors.size());
  for (int i = 0; i < dim; ++i) {
    for (std::size_t q = 0; q < factors.size(); ++q) digit[q] = (i / in_stride[q]) % factors[q];
    int r = 0;
    for (std::size_t p = 0; p < order.size(); ++p) r += digit[order[p]] * out_stride[p];
    map[i] = r;
  }

  CMatrix out(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

CMatrix partial_trace_raw(const CMatrix& m, const Dims& factors, const Dims& keep) {
  const int dim = product(factors);
  if (m.rows() != dim || m.cols() != dim) throw spec_error("partial_trace: factors do not match matrix dimension");
  if (keep.empty()) throw spec_error("partial_trace: keep must be non-empty");
  check_factor_indices(keep, factors.size(), "partial_trace");

  Dims kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw spec_error("partial_trace: duplicate factor in keep");

  const auto in_stride = strides(factors);
  Dims kept_factors;
  for (int q : kept) kept_factors.push_back(factors[q]);
  const auto kept_stride = strides(kept_factors);

  // Split each flat index into (kept part, traced part).
  std::vector<int> kpart(dim), tpart(dim);
  std::vector<bool> is_kept(factors.size(), false);
  for (int q : kept) is_kept[q] = true;
  for (int i = 0; i < dim; ++i) {
    int k = 0, t = 0;
    std::size_t kp = 0;
    for (std::size_t q = 0; q < factors.size(); ++q) {
      const int dq = (i / in_stride[q]) % factors[q];
      if (is_kept[q]) {
        k += dq * kept_stride[kp++];
      } else {
        t = t * factors[q] + dq;
      }
    }
    kpart[i] = k;
    tpart[i] = t;
  }

  const int out_dim = product(kept_factors);
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (tpart[i] == tpart[j]) out(kpart[i], kpart[j]) += m(i, j);
  return out;
}

std::vector<CMatrix> orthonormalize(const std::vector<CMatrix>& ops, double tol) {
  std::vector<CMatrix> basis;
  double scale = 0.0;
  for (const auto& op : ops) scale = std::max(scale, op.norm());
  if (scale == 0.0) return basis;
  for (const auto& op : ops) {
    CMatrix v = op;
    // Two Gram-Schmidt sweeps for numerical orthogonality.
    for (int sweep = 0; sweep < 2; ++sweep)
      for (const auto& e : basis) v -= (e.adjoint() * v).trace() * e;
    const double n = v.norm();
    if (n > tol * scale) basis.push_back(v / n);
  }
  return basis;
}

CMatrix apply_choi(const CMatrix& choi, int d_in, int d_out, const CMatrix& rho) {
  if (choi.rows() != d_in * d_out) throw spec_error("apply_choi: Choi dimension mismatch");
  if (rho.rows() != d_in || rho.cols() != d_in) throw spec_error("apply_choi: input dimension mismatch");
  CMatrix out = CMatrix::Zero(d_out, d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      if (rho(i, j) == Complex(0.0, 0.0)) continue;
      out += rho(i, j) * choi.block(i * d_out, j * d_out, d_out, d_out);
    }
  return out;
}

// ------------------------------- operations ---------------------------------

HermitianMatrix kron_perm(const std::vector<HermitianMatrix>& ops, const Dims& order) {
  if (ops.empty()) throw spec_error("kron_perm: empty operator list");
  CMatrix prod = ops[0].mat();
  Dims factors = ops[0].factors();
  for (std::size_t k = 1; k < ops.size(); ++k) {
    prod = kron(prod, ops[k].mat());
    factors.insert(factors.end(), ops[k].factors().begin(), ops[k].factors().end());
  }
  const CMatrix out = permute_factors(prod, factors, order);
  Dims out_factors(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out_factors[p] = factors[order[p]];
  return HermitianMatrix::from(out, out_factors);
}

HermitianMatrix partial_trace(const HermitianMatrix& x, const Dims& keep) {
  Dims kept = keep;
  std::sort(kept.begin(), kept.end());
  const CMatrix out = partial_trace_raw(x.mat(), x.factors(), kept);
  Dims out_factors;
  for (int q : kept) out_factors.push_back(x.factors()[q]);
  return HermitianMatrix::from(out, out_factors);
}

Spectrum spectrum(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x.mat());
  if (es.info() != Eigen::Success) throw solver_error("spectrum: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const HermitianMatrix& x) { return spectrum(x).min(); }
double max_eigenvalue(const HermitianMatrix& x) { return spectrum(x).max(); }

HermitianMatrix support_projector(const HermitianMatrix& x, double tol) {
  if (tol < 0.0) tol = 1e-9;
  const Spectrum sp = spectrum(x);
  const double lmax = std::max(sp.max(), 0.0);
  const double cutoff = tol * std::max(lmax, 1e-300);
  if (sp.min() < -cutoff) {
    std::ostringstream os;
    os << "support_projector: operator is not PSD (min eigenvalue " << sp.min() << ")";
    throw spec_error(os.str());
  }
  CMatrix p = CMatrix::Zero(x.dim(), x.dim());
  for (int k = 0; k < sp.eigenvalues.size(); ++k) {
    if (sp.eigenvalues(k) > cutoff) {
      const CVector v = sp.eigenvectors.col(k);
      p += v * v.adjoint();
    }
  }
  return HermitianMatrix::from(p, x.factors());
}

}  // namespace zerocap
