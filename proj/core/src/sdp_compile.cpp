#include "zerocap/sdp.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace zerocap {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::numerical: return "numerical";
  }
  return "unknown";
}

double snap_integer(double value, double tol) {
  const double r = std::round(value);
  return (std::abs(value - r) <= tol) ? r : value;
}

// ------------------------------- SdpProblem ---------------------------------

int SdpProblem::add_block(std::string label, int dim, BlockKind kind) {
  if (dim < 0) throw spec_error("SdpProblem: negative block dimension");
  blocks_.push_back({std::move(label), dim, kind});
  objective_.push_back(CMatrix::Zero(dim, dim));
  return static_cast<int>(blocks_.size()) - 1;
}

namespace {

void check_coeff(const SdpProblem::Block& blk, const CMatrix& coeff, const char* what) {
  if (coeff.rows() != blk.dim || coeff.cols() != blk.dim) {
    std::ostringstream os;
    os << what << ": coefficient for block '" << blk.label << "' has dimension " << coeff.rows()
       << "x" << coeff.cols() << ", expected " << blk.dim;
    throw spec_error(os.str());
  }
  const double scale = std::max(coeff.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (coeff - coeff.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale && asym > 1e-13) {
    std::ostringstream os;
    os << what << ": non-Hermitian coefficient for block '" << blk.label << "'";
    throw spec_error(os.str());
  }
}

}  // namespace

void SdpProblem::set_objective(int block, const CMatrix& coeff) {
  check_coeff(blocks_.at(block), coeff, "set_objective");
  objective_[block] = 0.5 * (coeff + coeff.adjoint().eval());
}

void SdpProblem::add_equality(const std::vector<std::pair<int, CMatrix>>& terms, double rhs) {
  Equality eq;
  eq.rhs = rhs;
  for (const auto& [block, coeff] : terms) {
    check_coeff(blocks_.at(block), coeff, "add_equality");
    if (coeff.cwiseAbs().maxCoeff() <= 1e-14) continue;  // basis-expansion round-off
    eq.terms.emplace_back(block, 0.5 * (coeff + coeff.adjoint().eval()));
  }
  equalities_.push_back(std::move(eq));
}

void SdpProblem::add_operator_equality(const std::vector<std::pair<int, AdjointFn>>& terms,
                                       const CMatrix& rhs, int target_dim) {
  if (rhs.rows() != target_dim || rhs.cols() != target_dim)
    throw spec_error("add_operator_equality: rhs dimension mismatch");
  for (const CMatrix& h : hermitian_basis(target_dim)) {
    std::vector<std::pair<int, CMatrix>> row;
    row.reserve(terms.size());
    for (const auto& [block, adjoint] : terms) row.emplace_back(block, adjoint(h));
    add_equality(row, hs_dot(h, rhs));
  }
}

// --------------------------------- compile ----------------------------------

namespace {

// [[Re, -Im], [Im, Re]] / 2; inner products against embedded variables then
// equal the complex-domain values.
RMatrix embed_herm(const CMatrix& a) {
  const int d = static_cast<int>(a.rows());
  RMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = 0.5 * a.real();
  out.bottomRightCorner(d, d) = 0.5 * a.real();
  out.topRightCorner(d, d) = -0.5 * a.imag();
  out.bottomLeftCorner(d, d) = 0.5 * a.imag();
  return out;
}

// Isometric vectorization of a symmetric matrix (off-diagonals scaled by
// sqrt(2)) so that plain dot products realize the Frobenius pairing.
RVector svec(const RMatrix& m) {
  const int n = static_cast<int>(m.rows());
  RVector v(n * (n + 1) / 2);
  const double s2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v(k++) = m(i, i);
    for (int j = i + 1; j < n; ++j) v(k++) = s2 * m(i, j);
  }
  return v;
}

}  // namespace

CompiledSdp compile(const SdpProblem& problem) {
  CompiledSdp out;
  out.obj_sign = problem.maximize() ? -1.0 : 1.0;
  out.total_rows = static_cast<int>(problem.equalities().size());

  const auto& blocks = problem.blocks();
  out.blocks.resize(blocks.size());
  int total_svec = 0;
  std::vector<int> svec_offset(blocks.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& rb = out.blocks[b];
    rb.diagonal = blocks[b].kind == BlockKind::diagonal;
    rb.dim = rb.diagonal ? blocks[b].dim : 2 * blocks[b].dim;
    if (rb.diagonal) {
      rb.c_diag = problem.objective()[b].real().diagonal() * out.obj_sign;
    } else {
      rb.c = embed_herm(problem.objective()[b]) * out.obj_sign;
    }
    svec_offset[b] = total_svec;
    total_svec += rb.diagonal ? rb.dim : rb.dim * (rb.dim + 1) / 2;
  }

  // Vectorize all rows, then keep a maximal independent subset (redundant
  // rows frequently arise from operator equalities on structured spaces and
  // would make the Schur complement singular).
  const int m_all = out.total_rows;
  RMatrix rows_t(total_svec, m_all);
  rows_t.setZero();
  RVector b_all(m_all);
  std::vector<std::vector<std::pair<int, RMatrix>>> rcoeff(m_all);
  std::vector<std::vector<std::pair<int, RVector>>> rdiag(m_all);
  for (int i = 0; i < m_all; ++i) {
    const auto& eq = problem.equalities()[i];
    b_all(i) = eq.rhs;
    for (const auto& [b, coeff] : eq.terms) {
      if (out.blocks[b].diagonal) {
        RVector v = coeff.real().diagonal();
        rows_t.block(svec_offset[b], i, out.blocks[b].dim, 1) = v;
        rdiag[i].emplace_back(b, std::move(v));
      } else {
        RMatrix e = embed_herm(coeff);
        rows_t.block(svec_offset[b], i, e.rows() * (e.rows() + 1) / 2, 1) = svec(e);
        rcoeff[i].emplace_back(b, std::move(e));
      }
    }
  }

  Eigen::ColPivHouseholderQR<RMatrix> qr(rows_t);
  qr.setThreshold(1e-11);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> kept;
  kept.reserve(rank);
  for (int k = 0; k < rank; ++k) kept.push_back(static_cast<int>(qr.colsPermutation().indices()(k)));
  std::sort(kept.begin(), kept.end());

  out.kept_rows = kept;
  out.b.resize(rank);
  for (int k = 0; k < rank; ++k) {
    const int i = kept[k];
    out.b(k) = b_all(i);
    for (auto& [b, coeff] : rcoeff[i]) {
      out.blocks[b].rows.push_back(k);
      out.blocks[b].coeff.push_back(std::move(coeff));
    }
    for (auto& [b, v] : rdiag[i]) {
      out.blocks[b].rows.push_back(k);
      out.blocks[b].diag_coeff.push_back(std::move(v));
    }
  }
  return out;
}

void dump(const CompiledSdp& compiled, std::ostream& os) {
  os << "blocks " << compiled.blocks.size() << " rows " << compiled.b.size() << "\n";
  for (std::size_t b = 0; b < compiled.blocks.size(); ++b) {
    const auto& rb = compiled.blocks[b];
    os << "block " << b << " dim " << rb.dim << (rb.diagonal ? " diagonal" : " symmetric") << "\n";
    if (rb.diagonal) {
      for (int i = 0; i < rb.c_diag.size(); ++i)
        if (rb.c_diag(i) != 0.0) os << "c " << b << " " << i << " " << i << " " << rb.c_diag(i) << "\n";
    } else if (rb.c.size() > 0) {
      for (int i = 0; i < rb.c.rows(); ++i)
        for (int j = i; j < rb.c.cols(); ++j)
          if (rb.c(i, j) != 0.0) os << "c " << b << " " << i << " " << j << " " << rb.c(i, j) << "\n";
    }
    for (std::size_t k = 0; k < rb.rows.size(); ++k) {
      const int eq = rb.rows[k];
      if (rb.diagonal) {
        const RVector& v = rb.diag_coeff[k];
        for (int i = 0; i < v.size(); ++i)
          if (v(i) != 0.0) os << "A " << eq << " " << b << " " << i << " " << i << " " << v(i) << "\n";
      } else {
        const RMatrix& a = rb.coeff[k];
        for (int i = 0; i < a.rows(); ++i)
          for (int j = i; j < a.cols(); ++j)
            if (a(i, j) != 0.0) os << "A " << eq << " " << b << " " << i << " " << j << " " << a(i, j) << "\n";
      }
    }
  }
  for (int i = 0; i < compiled.b.size(); ++i) os << "b " << i << " " << compiled.b(i) << "\n";
}

}  // namespace zerocap
