#include "zerocap/nosig.hpp"

#include <cmath>
#include <sstream>

namespace zerocap {

namespace {

// Reorder [first, second, third, fourth] -> canonical: both builders
// produce [port0, X, Y, port3] from a [port0, port3, X, Y] layout.
const Dims kFormToCanonical = {0, 2, 3, 1};

CMatrix identity_like(int d) { return CMatrix::Identity(d, d); }

// sigma = (N (x) id_spec)(rho) for a map given by its Choi matrix, acting on
// the leading factor group of rho.
CMatrix apply_choi_front(const CMatrix& choi, int d_in, int d_out, const CMatrix& rho,
                         int d_spec) {
  CMatrix out = CMatrix::Zero(d_out * d_spec, d_out * d_spec);
  for (int o = 0; o < d_out; ++o)
    for (int op = 0; op < d_out; ++op)
      for (int m = 0; m < d_in; ++m)
        for (int mp = 0; mp < d_in; ++mp) {
          const Complex j = choi(m * d_out + o, mp * d_out + op);
          if (j == Complex(0.0, 0.0)) continue;
          out.block(o * d_spec, op * d_spec, d_spec, d_spec) +=
              j * rho.block(m * d_spec, mp * d_spec, d_spec, d_spec);
        }
  return out;
}

}  // namespace

// -------------------------------- check_ns -----------------------------------

NsCheckReport check_ns(const NsCorrelation& omega) {
  const auto [ai, ao, bi, bo] = omega.dims;
  if (omega.omega.dim() != ai * ao * bi * bo)
    throw spec_error("check_ns: dims inconsistent with the Choi matrix");
  const Dims factors = {ai, ao, bi, bo};
  const CMatrix& w = omega.omega.mat();

  NsCheckReport report;
  report.cp_min_eigenvalue = min_eigenvalue(omega.omega);
  report.tp_residual =
      (partial_trace_raw(w, factors, {0, 2}) - identity_like(ai * bi)).cwiseAbs().maxCoeff();

  // The no-signalling families need only be verified on a traceless
  // Hermitian basis of the relevant input reference.
  const int rest_a = ao * bi * bo;
  for (const CMatrix& x : traceless_hermitian_basis(ai)) {
    const CMatrix m = w * kron(x.transpose(), identity_like(rest_a));
    const double r = partial_trace_raw(m, factors, {2, 3}).cwiseAbs().maxCoeff();
    report.a_to_b_residual = std::max(report.a_to_b_residual, r);
  }
  for (const CMatrix& y : traceless_hermitian_basis(bi)) {
    const CMatrix m =
        w * kron(kron(identity_like(ai * ao), y.transpose()), identity_like(bo));
    const double r = partial_trace_raw(m, factors, {0, 1}).cwiseAbs().maxCoeff();
    report.b_to_a_residual = std::max(report.b_to_a_residual, r);
  }
  return report;
}

// -------------------------------- builders -----------------------------------

NsCorrelation build_capacity_ns(const NCGraph& k, int m, const SolveOptions& opts) {
  if (m < 1) throw spec_error("build_capacity_ns: need at least one message");
  const QuantityResult sol = upsilon_with_trace(k, static_cast<double>(m), opts);
  const CMatrix e = sol.primal_witnesses.at("E").mat();
  const int dA = k.d_A, dB = k.d_B;

  CMatrix form;  // on [M_a, M_b, A, B]
  if (m == 1) {
    form = e;
  } else {
    const CMatrix f = sol.primal_witnesses.at("F_raw").mat() / (m - 1.0);
    CMatrix d = CMatrix::Zero(m * m, m * m);
    for (int i = 0; i < m; ++i) d(i * m + i, i * m + i) = 1.0;
    form = (kron(d, e) + kron(identity_like(m * m) - d, f)) / m;
  }

  NsCorrelation out;
  out.dims = {m, dA, dB, m};
  out.classical_ports = {true, false, false, true};
  const CMatrix canonical =
      m == 1 ? form : permute_factors(form, {m, m, dA, dB}, kFormToCanonical);
  out.omega = HermitianMatrix::from(canonical, {m, dA, dB, m});
  return out;
}

NsCorrelation build_simulation_ns(const Channel& n, int m, const SolveOptions& opts) {
  const int dA = n.d_in, dB = n.d_out;
  const CMatrix j = n.choi.mat();

  if (m < 1) throw spec_error("build_simulation_ns: need at least one message");
  if (m == 1) {
    // Only constant channels can be simulated for free.
    const CMatrix gamma = partial_trace_raw(j, {dA, dB}, {1}) / dA;
    if ((j - kron(identity_like(dA), gamma)).cwiseAbs().maxCoeff() > 1e-9)
      throw infeasible_error("build_simulation_ns: one message simulates only constant channels");
    NsCorrelation out;
    out.dims = {dA, 1, 1, dB};
    out.classical_ports = {false, true, true, false};
    out.omega = HermitianMatrix::from(j, {dA, 1, 1, dB});
    return out;
  }

  const QuantityResult cost = sigma_channel(n, opts);
  if (!cost.ok()) throw solver_error("build_simulation_ns: min-entropy solve failed");
  if (m < cost.integer_part) {
    std::ostringstream os;
    os << "build_simulation_ns: " << m << " messages below the simulation cost ceiling "
       << cost.integer_part;
    throw infeasible_error(os.str());
  }

  // Pad the min-entropy witness so tr T' = m, then split the correlation
  // into the target channel and the complement.
  CMatrix t = cost.primal_witnesses.at("T").mat();
  t += ((m - t.trace().real()) / dB) * identity_like(dB);
  const CMatrix f = (kron(identity_like(dA), t) - j) / (m - 1.0);

  CMatrix d = CMatrix::Zero(m * m, m * m);
  for (int i = 0; i < m; ++i) d(i * m + i, i * m + i) = 1.0;
  const CMatrix form = (kron(j, d) + kron(f, identity_like(m * m) - d)) / m;  // [A, B, Ma, Mb]

  NsCorrelation out;
  out.dims = {dA, m, m, dB};
  out.classical_ports = {false, true, true, false};
  const CMatrix canonical = permute_factors(form, {dA, dB, m, m}, kFormToCanonical);
  out.omega = HermitianMatrix::from(canonical, {dA, m, m, dB});
  return out;
}

// -------------------------------- compose ------------------------------------

Channel compose(const NsCorrelation& omega, const Channel& n) {
  const auto [ai, ao, bi, bo] = omega.dims;
  if (n.d_in != ao || n.d_out != bi) {
    std::ostringstream os;
    os << "compose: channel is " << n.d_in << "->" << n.d_out << ", correlation expects " << ao
       << "->" << bi;
    throw spec_error(os.str());
  }

  // Choi of the correlation with its input factors leading: [Ai, Bi, Ao, Bo].
  const CMatrix pi_choi =
      permute_factors(omega.omega.mat(), {ai, ao, bi, bo}, {0, 2, 1, 3});
  const CMatrix phi_b = max_entangled(bi);

  CMatrix j_out = CMatrix::Zero(ai * bo, ai * bo);
  for (int kk = 0; kk < ai; ++kk)
    for (int ll = 0; ll < ai; ++ll) {
      // basis input |k><l| on A_i, entangled reference on (B_i, B_i')
      CMatrix rho = kron(matrix_unit(ai, kk, ll), phi_b);  // [Ai, Bi, Bi']
      // correlation acts on (Ai, Bi) with the reference as spectator
      CMatrix sigma = apply_choi_front(pi_choi, ai * bi, ao * bo, rho, bi);  // [Ao, Bo, Bi']
      // channel acts on Ao
      CMatrix tau = apply_choi_front(n.choi.mat(), ao, bi, sigma, bo * bi);  // [Bnew, Bo, Bi']
      // contract (Bnew, Bi') against the entangled reference
      const CMatrix taup = permute_factors(tau, {bi, bo, bi}, {0, 2, 1});  // [Bnew, Bi', Bo]
      for (int b = 0; b < bo; ++b)
        for (int bp = 0; bp < bo; ++bp) {
          Complex v = 0.0;
          for (int p = 0; p < bi; ++p)
            for (int q = 0; q < bi; ++q)
              v += taup((p * bi + p) * bo + b, (q * bi + q) * bo + bp);
          j_out(kk * bo + b, ll * bo + bp) = v;
        }
    }
  return channel_from_choi(j_out, ai, bo);
}

double superop_trace(const Channel& f, const Channel& n) {
  if (f.d_in != n.d_out || f.d_out != n.d_in)
    throw spec_error("superop_trace: maps do not close a loop");
  Complex total = 0.0;
  for (int a = 0; a < n.d_in; ++a)
    for (int b = 0; b < n.d_in; ++b) {
      const CMatrix unit = matrix_unit(n.d_in, a, b);
      total += (unit.adjoint() * f.apply(n.apply(unit))).trace();
    }
  return total.real();
}

// ------------------------------ verification ---------------------------------

CodeReport verify_code(const NCGraph& k, const Channel& n, int m, const SolveOptions& opts) {
  const CMatrix pn = support_projector(n.choi).mat();
  const CMatrix rest = (CMatrix::Identity(k.P.dim(), k.P.dim()) - k.P.mat()) * pn;
  if (rest.cwiseAbs().maxCoeff() > 1e-7)
    throw spec_error("verify_code: the channel's Kraus space is not contained in the graph");

  CodeReport report;
  report.messages = m;
  const NsCorrelation omega = build_capacity_ns(k, m, opts);
  report.ns = check_ns(omega);

  const Channel composed = compose(omega, n);
  const CMatrix jc = composed.choi.mat();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      const double p = jc(a * m + b, a * m + b).real();
      report.max_offdiagonal = std::max(report.max_offdiagonal, std::abs(p));
    }

  if (m >= 2) {
    const QuantityResult sol = upsilon_with_trace(k, static_cast<double>(m), opts);
    const CMatrix f = sol.primal_witnesses.at("F_raw").mat() / (m - 1.0);
    report.orthogonality = std::abs(hs_dot(f, n.conjugate_choi()));
  } else {
    report.notes = "single-message code: trivial correlation, no complement block";
  }
  return report;
}

SimulationReport verify_simulation(const Channel& n, int m, const SolveOptions& opts) {
  SimulationReport report;
  report.messages = m;
  const NsCorrelation omega = build_simulation_ns(n, m, opts);
  report.ns = check_ns(omega);

  const Channel composed =
      compose(omega, m == 1 ? identity_channel(1) : classical_identity_channel(m));
  report.choi_distance = (composed.choi.mat() - n.choi.mat()).cwiseAbs().maxCoeff();
  if (m == 1) report.notes = "single-message simulation: constant channel convention";
  return report;
}

// ------------------------- deliberate signalling ------------------------------

NsCorrelation forwarding_correlation(int d) {
  // A_i is forwarded to B_o; A_o emits a fixed state; B_i is discarded.
  const CMatrix omega_state = identity_like(d) / d;
  const CMatrix form = kron(kron(max_entangled(d), omega_state), identity_like(d));
  // [Ai, Bo, Ao, Bi] -> [Ai, Ao, Bi, Bo]
  const CMatrix canonical = permute_factors(form, {d, d, d, d}, {0, 2, 3, 1});
  NsCorrelation out;
  out.dims = {d, d, d, d};
  out.omega = HermitianMatrix::from(canonical, {d, d, d, d});
  return out;
}

NsCorrelation backward_correlation(int d) {
  // B_i is forwarded to A_o; B_o emits a fixed state; A_i is discarded.
  const CMatrix omega_state = identity_like(d) / d;
  const CMatrix canonical = kron(kron(identity_like(d), max_entangled(d)), omega_state);
  NsCorrelation out;
  out.dims = {d, d, d, d};
  out.omega = HermitianMatrix::from(canonical, {d, d, d, d});
  return out;
}

NsCorrelation classical_box(
    const std::vector<std::vector<std::vector<std::vector<double>>>>& q) {
  const int nx = static_cast<int>(q.size());
  const int ny = static_cast<int>(q[0].size());
  const int na = static_cast<int>(q[0][0].size());
  const int nb = static_cast<int>(q[0][0][0].size());
  CMatrix w = CMatrix::Zero(nx * na * ny * nb, nx * na * ny * nb);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          const int idx = ((x * na + a) * ny + y) * nb + b;
          w(idx, idx) = q[x][y][a][b];
        }
  NsCorrelation out;
  out.dims = {nx, na, ny, nb};
  out.classical_ports = {true, true, true, true};
  out.omega = HermitianMatrix::from(w, {nx, na, ny, nb});
  return out;
}

}  // namespace zerocap
