#include "zerocap/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zerocap/sdp.hpp"

namespace zerocap {

namespace {

constexpr double kProjTol = 1e-9;
constexpr int kTensorDimCap = 4096;

void check_kraus_shapes(const std::vector<CMatrix>& kraus, int d_in, int d_out, const char* what) {
  if (kraus.empty()) throw spec_error(std::string(what) + ": empty Kraus list");
  for (const auto& e : kraus) {
    if (e.rows() != d_out || e.cols() != d_in) {
      std::ostringstream os;
      os << what << ": Kraus operator is " << e.rows() << "x" << e.cols() << ", expected " << d_out
         << "x" << d_in;
      throw spec_error(os.str());
    }
  }
}

// (1 (x) E)|Phi> laid out on factors [d_in, d_out].
CVector choi_vector(const CMatrix& e) {
  const int d_in = static_cast<int>(e.cols());
  const int d_out = static_cast<int>(e.rows());
  CVector v(d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int b = 0; b < d_out; ++b) v(i * d_out + b) = e(b, i);
  return v;
}

}  // namespace

// --------------------------------- Channel ----------------------------------

CMatrix Channel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(d_out, d_out);
  for (const auto& e : kraus) out += e * rho * e.adjoint();
  return out;
}

CMatrix Channel::apply_adjoint(const CMatrix& sigma) const {
  CMatrix out = CMatrix::Zero(d_in, d_in);
  for (const auto& e : kraus) out += e.adjoint() * sigma * e;
  return out;
}

Channel channel_from_kraus(std::vector<CMatrix> kraus, int d_in, int d_out) {
  check_kraus_shapes(kraus, d_in, d_out, "channel_from_kraus");
  Channel n;
  n.d_in = d_in;
  n.d_out = d_out;
  n.kraus = std::move(kraus);

  CMatrix j = CMatrix::Zero(d_in * d_out, d_in * d_out);
  CMatrix sum = CMatrix::Zero(d_in, d_in);
  for (const auto& e : n.kraus) {
    const CVector v = choi_vector(e);
    j += v * v.adjoint();
    sum += e.adjoint() * e;
  }
  n.choi = HermitianMatrix::from(j, {d_in, d_out});
  n.trace_preserving = (sum - CMatrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() <= 1e-9;
  return n;
}

Channel channel_from_choi(const CMatrix& choi, int d_in, int d_out, double tol) {
  if (choi.rows() != d_in * d_out) throw spec_error("channel_from_choi: dimension mismatch");
  const HermitianMatrix j = HermitianMatrix::from(choi, {d_in, d_out});
  const Spectrum sp = spectrum(j);
  const double scale = std::max(std::abs(sp.max()), 1e-300);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < sp.eigenvalues.size(); ++k) {
    const double lam = sp.eigenvalues(k);
    if (lam < -tol * scale * 10) throw spec_error("channel_from_choi: Choi matrix is not PSD");
    if (lam <= tol * scale) continue;
    const CVector v = std::sqrt(lam) * sp.eigenvectors.col(k);
    CMatrix e(d_out, d_in);
    for (int i = 0; i < d_in; ++i)
      for (int b = 0; b < d_out; ++b) e(b, i) = v(i * d_out + b);
    kraus.push_back(std::move(e));
  }
  if (kraus.empty()) kraus.push_back(CMatrix::Zero(d_out, d_in));
  return channel_from_kraus(std::move(kraus), d_in, d_out);
}

Channel channel_from_classical(const RMatrix& transition) {
  const int nx = static_cast<int>(transition.rows());
  const int ny = static_cast<int>(transition.cols());
  if (nx == 0 || ny == 0) throw spec_error("channel_from_classical: empty transition matrix");
  std::vector<CMatrix> kraus;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const double p = transition(x, y);
      if (p < -1e-12) throw spec_error("channel_from_classical: negative probability");
      if (p <= 0.0) continue;
      CMatrix e = CMatrix::Zero(ny, nx);
      e(y, x) = std::sqrt(p);
      kraus.push_back(std::move(e));
    }
  if (kraus.empty()) throw spec_error("channel_from_classical: all-zero transition matrix");
  return channel_from_kraus(std::move(kraus), nx, ny);
}

Channel identity_channel(int d) {
  return channel_from_kraus({CMatrix::Identity(d, d)}, d, d);
}

Channel constant_channel(const CMatrix& sigma, int d_in) {
  const int d_out = static_cast<int>(sigma.rows());
  const Spectrum sp = spectrum(HermitianMatrix::from(sigma));
  std::vector<CMatrix> kraus;
  for (int k = 0; k < sp.eigenvalues.size(); ++k) {
    if (sp.eigenvalues(k) <= 1e-14) continue;
    for (int i = 0; i < d_in; ++i) {
      CMatrix e = CMatrix::Zero(d_out, d_in);
      e.col(i) = std::sqrt(sp.eigenvalues(k)) * sp.eigenvectors.col(k);
      kraus.push_back(std::move(e));
    }
  }
  return channel_from_kraus(std::move(kraus), d_in, d_out);
}

Channel classical_identity_channel(int l) {
  std::vector<CMatrix> kraus;
  for (int i = 0; i < l; ++i) kraus.push_back(matrix_unit(l, i, i));
  return channel_from_kraus(std::move(kraus), l, l);
}

Channel tensor(const Channel& a, const Channel& b) {
  std::vector<CMatrix> kraus;
  for (const auto& ea : a.kraus)
    for (const auto& eb : b.kraus) kraus.push_back(kron(ea, eb));
  return channel_from_kraus(std::move(kraus), a.d_in * b.d_in, a.d_out * b.d_out);
}

Channel power(const Channel& n, int copies) {
  if (copies < 1) throw spec_error("power: need at least one copy");
  Channel out = n;
  for (int k = 1; k < copies; ++k) out = tensor(out, n);
  return out;
}

// ---------------------------------- Graph -----------------------------------

void Graph::add_edge(int i, int j) {
  if (i == j) throw spec_error("Graph: self-loop rejected");
  if (i < 0 || j < 0 || i >= n || j >= n) throw spec_error("Graph: vertex out of range");
  edges.insert({std::min(i, j), std::max(i, j)});
}

bool Graph::has_edge(int i, int j) const {
  return edges.count({std::min(i, j), std::max(i, j)}) > 0;
}

Graph complete_graph(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph empty_graph(int n) { return Graph{n, {}}; }

Graph cycle_graph(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph strong_product(const Graph& g, const Graph& h) {
  Graph out{g.n * h.n, {}};
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < h.n; ++j)
      for (int k = 0; k < g.n; ++k)
        for (int l = 0; l < h.n; ++l) {
          const int u = i * h.n + j, v = k * h.n + l;
          if (u >= v) continue;
          const bool gok = (i == k) || g.has_edge(i, k);
          const bool hok = (j == l) || h.has_edge(j, l);
          if (gok && hok) out.add_edge(u, v);
        }
  return out;
}

// --------------------------------- NCGraph ----------------------------------

NCGraph graph_from_kraus(const std::vector<CMatrix>& kraus, int d_in, int d_out) {
  check_kraus_shapes(kraus, d_in, d_out, "graph_from_kraus");
  NCGraph k;
  k.d_A = d_in;
  k.d_B = d_out;
  k.kraus_basis = orthonormalize(kraus);
  if (k.kraus_basis.empty()) throw spec_error("graph_from_kraus: Kraus list spans the zero space");
  CMatrix p = CMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const auto& e : k.kraus_basis) {
    const CVector v = choi_vector(e);
    p += v * v.adjoint();
  }
  k.P = HermitianMatrix::from(p, {d_in, d_out});
  return k;
}

NCGraph graph_from_channel(const Channel& n) { return graph_from_kraus(n.kraus, n.d_in, n.d_out); }

NCGraph graph_from_cq(const std::vector<CMatrix>& projectors) {
  if (projectors.empty()) throw spec_error("graph_from_cq: empty projector list");
  const int d_B = static_cast<int>(projectors[0].rows());
  const int d_A = static_cast<int>(projectors.size());
  std::vector<CMatrix> kraus;
  for (int i = 0; i < d_A; ++i) {
    const CMatrix& p = projectors[i];
    if (p.rows() != d_B || p.cols() != d_B) throw spec_error("graph_from_cq: ragged projector list");
    if ((p * p - p).cwiseAbs().maxCoeff() > kProjTol) {
      std::ostringstream os;
      os << "graph_from_cq: entry " << i << " is not a projector";
      throw spec_error(os.str());
    }
    const Spectrum sp = spectrum(HermitianMatrix::from(p));
    for (int l = 0; l < sp.eigenvalues.size(); ++l) {
      if (sp.eigenvalues(l) < 0.5) continue;
      CMatrix e = CMatrix::Zero(d_B, d_A);
      e.col(i) = sp.eigenvectors.col(l);
      kraus.push_back(std::move(e));
    }
  }
  NCGraph k = graph_from_kraus(kraus, d_A, d_B);
  k.cq = projectors;
  // P = sum_i |i><i| (x) P_i exactly, by construction.
  CMatrix p = CMatrix::Zero(d_A * d_B, d_A * d_B);
  for (int i = 0; i < d_A; ++i) p.block(i * d_B, i * d_B, d_B, d_B) = projectors[i];
  k.P = HermitianMatrix::from(p, {d_A, d_B});
  return k;
}

NCGraph graph_from_classical(const RMatrix& transition) {
  const int nx = static_cast<int>(transition.rows());
  const int ny = static_cast<int>(transition.cols());
  std::vector<CMatrix> projectors;
  for (int x = 0; x < nx; ++x) {
    CMatrix p = CMatrix::Zero(ny, ny);
    bool any = false;
    for (int y = 0; y < ny; ++y)
      if (transition(x, y) > 0.0) {
        p(y, y) = 1.0;
        any = true;
      }
    if (!any) {
      std::ostringstream os;
      os << "graph_from_classical: input " << x << " has no outgoing edge";
      throw spec_error(os.str());
    }
    projectors.push_back(std::move(p));
  }
  return graph_from_cq(projectors);
}

NCGraph noiseless_classical_graph(int l) {
  std::vector<CMatrix> projectors;
  for (int i = 0; i < l; ++i) projectors.push_back(matrix_unit(l, i, i));
  return graph_from_cq(projectors);
}

NCGraph noiseless_quantum_graph(int l) {
  return graph_from_kraus({CMatrix::Identity(l, l)}, l, l);
}

namespace {

std::pair<CVector, CVector> two_state_vectors(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw spec_error("two_state: alpha must lie in (0, 1]");
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  CVector psi0(2), psi1(2);
  psi0 << alpha, beta;
  psi1 << alpha, -beta;
  return {psi0, psi1};
}

}  // namespace

NCGraph two_state_graph(double alpha) {
  const auto [psi0, psi1] = two_state_vectors(alpha);
  return graph_from_cq({psi0 * psi0.adjoint(), psi1 * psi1.adjoint()});
}

Channel two_state_channel(double alpha) {
  const auto [psi0, psi1] = two_state_vectors(alpha);
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0.col(0) = psi0;
  e1.col(1) = psi1;
  return channel_from_kraus({e0, e1}, 2, 2);
}

NCGraph amplitude_damping_graph(double r) {
  return graph_from_channel(amplitude_damping_channel(r));
}

Channel amplitude_damping_channel(double r) {
  if (r < 0.0 || r > 1.0) throw spec_error("amplitude_damping: r must lie in [0, 1]");
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - r);
  e1(0, 1) = std::sqrt(r);
  return channel_from_kraus({e0, e1}, 2, 2);
}

NCGraph pentagon_umbrella_graph() {
  // Umbrella vectors: five unit vectors with a common axis overlap of
  // 5^{-1/4} whose second neighbours (the non-edges of C5) are exactly
  // orthogonal.
  const double c2 = 1.0 / std::sqrt(5.0);           // cos^2 of the opening angle
  const double s2 = 1.0 - c2;
  std::vector<CMatrix> projectors;
  for (int i = 0; i < 5; ++i) {
    const double phi = 2.0 * M_PI * i / 5.0;
    CVector u(3);
    u << std::sqrt(c2), std::sqrt(s2) * std::cos(phi), std::sqrt(s2) * std::sin(phi);
    projectors.push_back(u * u.adjoint());
  }
  return graph_from_cq(projectors);
}

NCGraph tensor(const NCGraph& a, const NCGraph& b) {
  const long total = static_cast<long>(a.d_A) * b.d_A * a.d_B * b.d_B;
  if (total > kTensorDimCap) {
    std::ostringstream os;
    os << "tensor: product state space " << total << " exceeds the cap of " << kTensorDimCap;
    throw spec_error(os.str());
  }
  NCGraph k;
  k.d_A = a.d_A * b.d_A;
  k.d_B = a.d_B * b.d_B;
  // reorder A1 B1 A2 B2 -> A1 A2 B1 B2
  k.P = kron_perm({a.P, b.P}, {0, 2, 1, 3}).with_factors({k.d_A, k.d_B});
  for (const auto& ea : a.kraus_basis)
    for (const auto& eb : b.kraus_basis) k.kraus_basis.push_back(kron(ea, eb));
  if (a.cq && b.cq) {
    std::vector<CMatrix> cq;
    for (const auto& p : *a.cq)
      for (const auto& q : *b.cq) cq.push_back(kron(p, q));
    k.cq = std::move(cq);
  }
  return k;
}

NCGraph power(const NCGraph& k, int n) {
  if (n < 1) throw spec_error("power: need at least one copy");
  NCGraph out = k;
  for (int i = 1; i < n; ++i) out = tensor(out, k);
  return out;
}

double f_max(const CMatrix& p0, const CMatrix& p1) {
  if (p0.rows() != p1.rows() || p0.cols() != p1.cols())
    throw spec_error("f_max: projectors live on different spaces");
  for (const CMatrix* p : {&p0, &p1})
    if ((*p * *p - *p).cwiseAbs().maxCoeff() > kProjTol) throw spec_error("f_max: input is not a projector");
  Eigen::JacobiSVD<CMatrix> svd(p0 * p1);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Graph confusability_graph(const NCGraph& k) {
  if (!k.cq) throw spec_error("confusability_graph: missing cq decomposition");
  Graph g{k.d_A, {}};
  for (int i = 0; i < k.d_A; ++i)
    for (int j = i + 1; j < k.d_A; ++j)
      if (f_max((*k.cq)[i], (*k.cq)[j]) > 1e-9) g.add_edge(i, j);
  return g;
}

// ---------------------------- Kraus-space validity --------------------------

KrausSpaceReport validate_kraus_space(const std::vector<CMatrix>& kraus, int d_in, int d_out) {
  return validate_kraus_space(graph_from_kraus(kraus, d_in, d_out));
}

KrausSpaceReport validate_kraus_space(const NCGraph& k) {
  constexpr double eps = 1e-6;
  const auto& basis = k.kraus_basis;
  const int r = static_cast<int>(basis.size());
  const int d = k.d_A;

  // sum_kl R_kl E_k^dag E_l as a linear map of the Hermitian matrix R.
  const auto apply = [&](const CMatrix& R) {
    CMatrix out = CMatrix::Zero(d, d);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) out += R(a, b) * (basis[a].adjoint() * basis[b]);
    return out;
  };

  SdpProblem prob;
  const int rhat = prob.add_block("Rhat", r, BlockKind::hermitian);
  prob.set_objective(rhat, CMatrix::Identity(r, r));

  // adjoint of `apply` by expansion over a Hermitian basis of the R-space
  const auto rbasis = hermitian_basis(r);
  const auto adjoint = [&](const CMatrix& g) {
    CMatrix q = CMatrix::Zero(r, r);
    for (const auto& h : rbasis) q += hs_dot(g, apply(h)) * h;
    return q;
  };
  CMatrix rhs = CMatrix::Identity(d, d) - eps * apply(CMatrix::Identity(r, r));
  prob.add_operator_equality({{rhat, adjoint}}, rhs, d);

  const SdpSolution sol = solve(prob);
  KrausSpaceReport report;
  if (sol.status == SdpStatus::optimal) {
    report.valid = true;
    report.witness = sol.X[rhat] + eps * CMatrix::Identity(r, r);
  } else if (sol.status == SdpStatus::infeasible) {
    report.valid = false;
    const auto gbasis = hermitian_basis(d);
    report.certificate = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < sol.y.size(); ++i) report.certificate += sol.y[i] * gbasis[i];
  } else {
    throw solver_error("validate_kraus_space: solver returned " + to_string(sol.status));
  }
  return report;
}

std::optional<Channel> canonical_channel(const NCGraph& k) {
  if (k.cq) {
    std::vector<CMatrix> kraus;
    for (int i = 0; i < k.d_A; ++i) {
      const CMatrix& p = (*k.cq)[i];
      const double tr = p.trace().real();
      const Spectrum sp = spectrum(HermitianMatrix::from(p));
      for (int l = 0; l < sp.eigenvalues.size(); ++l) {
        if (sp.eigenvalues(l) < 0.5) continue;
        CMatrix e = CMatrix::Zero(k.d_B, k.d_A);
        e.col(i) = sp.eigenvectors.col(l) / std::sqrt(tr);
        kraus.push_back(std::move(e));
      }
    }
    return channel_from_kraus(std::move(kraus), k.d_A, k.d_B);
  }
  const KrausSpaceReport report = validate_kraus_space(k);
  if (!report.valid) return std::nullopt;

  // Polish the solver witness onto the exact normalization manifold: a
  // least-squares Hermitian correction with sum_kl R_kl E_k^dag E_l = 1 to
  // machine precision, so the reconstructed channel passes the CPTP check.
  CMatrix witness = report.witness;
  {
    const int r = static_cast<int>(k.kraus_basis.size());
    const int d = k.d_A;
    const auto rbasis = hermitian_basis(r);
    const auto gbasis = hermitian_basis(d);
    const auto apply = [&](const CMatrix& R) {
      CMatrix out = CMatrix::Zero(d, d);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          out += R(a, b) * (k.kraus_basis[a].adjoint() * k.kraus_basis[b]);
      return out;
    };
    RMatrix lmat(gbasis.size(), rbasis.size());
    for (std::size_t a = 0; a < rbasis.size(); ++a) {
      const CMatrix la = apply(rbasis[a]);
      for (std::size_t b = 0; b < gbasis.size(); ++b) lmat(b, a) = hs_dot(gbasis[b], la);
    }
    for (int sweep = 0; sweep < 2; ++sweep) {
      const CMatrix res = CMatrix::Identity(d, d) - apply(witness);
      RVector rv(gbasis.size());
      for (std::size_t b = 0; b < gbasis.size(); ++b) rv(b) = hs_dot(gbasis[b], res);
      const RVector delta = lmat.colPivHouseholderQr().solve(rv);
      for (std::size_t a = 0; a < rbasis.size(); ++a) witness += delta(a) * rbasis[a];
    }
  }

  // With r = a^dag a and a = r^{1/2}, the operators F_j = sum_k a_jk E_k
  // satisfy sum_j F_j^dag F_j = 1.
  const Spectrum sp = spectrum(HermitianMatrix::from(witness));
  const int r = static_cast<int>(k.kraus_basis.size());
  CMatrix root = CMatrix::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    const CVector v = sp.eigenvectors.col(i);
    root += std::sqrt(std::max(0.0, sp.eigenvalues(i))) * (v * v.adjoint());
  }
  std::vector<CMatrix> kraus;
  for (int j = 0; j < r; ++j) {
    CMatrix f = CMatrix::Zero(k.d_B, k.d_A);
    for (int kk = 0; kk < r; ++kk) f += root(j, kk) * k.kraus_basis[kk];
    kraus.push_back(std::move(f));
  }
  return channel_from_kraus(std::move(kraus), k.d_A, k.d_B);
}

}  // namespace zerocap
