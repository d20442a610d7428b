#include "zerocap/quantities.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zerocap {

namespace {

enum class Rounding { floor, ceil };

long long rounded(double value, Rounding mode) {
  const double snapped = snap_integer(value);
  return static_cast<long long>(mode == Rounding::floor ? std::floor(snapped) : std::ceil(snapped));
}

QuantityResult combine(const SdpSolution& primal, const SdpSolution& dual, Rounding mode) {
  QuantityResult r;
  r.value = primal.primal_value;
  r.integer_part = rounded(r.value, mode);
  r.crosscheck_gap = std::abs(primal.primal_value - dual.primal_value);
  r.status = primal.ok() && dual.ok()
                 ? SdpStatus::optimal
                 : (primal.ok() ? dual.status : primal.status);
  return r;
}

HermitianMatrix herm(const CMatrix& m, Dims f = {}) { return HermitianMatrix::from(m, std::move(f)); }

// Free variables enter the cone programs as differences of PSD pairs; a tiny
// trace penalty on both halves bounds the otherwise unbounded optimal face
// (the common-shift recession direction) and keeps the interior-point
// iterates well conditioned.  It perturbs optimal values by O(1e-9 * ||T||_1),
// far inside every cross-check tolerance.
constexpr double kSplitPenalty = 1e-9;

// Columns: orthonormal basis of the range (resp. kernel) of a projector.
CMatrix projector_basis(const CMatrix& p, bool range) {
  const Spectrum sp = spectrum(herm(p));
  int count = 0;
  for (int k = 0; k < sp.eigenvalues.size(); ++k)
    if ((sp.eigenvalues(k) > 0.5) == range) ++count;
  CMatrix v(p.rows(), count);
  int c = 0;
  for (int k = 0; k < sp.eigenvalues.size(); ++k)
    if ((sp.eigenvalues(k) > 0.5) == range) v.col(c++) = sp.eigenvectors.col(k);
  return v;
}

CMatrix hermitized(const CMatrix& m) { return 0.5 * (m + m.adjoint().eval()); }

}  // namespace

double binary_entropy(double p) {
  const auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

// ------------------------------ Upsilon -------------------------------------

namespace {

// max tr S  s.t.  0 <= E <= S (x) 1,  tr_A E = 1_B,  S(x)1 - E supported on
// the complement of P.  The support condition enters through the compressed
// slack G-hat living on ker P.
SdpSolution upsilon_full_primal(const NCGraph& k, const SolveOptions& opts,
                                std::optional<double> trace_pin, CMatrix* f_raw) {
  const int dA = k.d_A, dB = k.d_B, dAB = dA * dB;
  const CMatrix vq = projector_basis(k.P.mat(), /*range=*/false);
  const int rq = static_cast<int>(vq.cols());

  SdpProblem prob;
  prob.set_maximize(!trace_pin.has_value());
  const int s = prob.add_block("S", dA, BlockKind::hermitian);
  const int e = prob.add_block("E", dAB, BlockKind::hermitian);
  const int g = rq > 0 ? prob.add_block("Ghat", rq, BlockKind::hermitian) : -1;
  if (!trace_pin) prob.set_objective(s, CMatrix::Identity(dA, dA));

  // S (x) 1 - E - Vq Ghat Vq^dag = 0
  std::vector<std::pair<int, SdpProblem::AdjointFn>> terms = {
      {s, [dims = Dims{dA, dB}](const CMatrix& h) { return partial_trace_raw(h, dims, {0}); }},
      {e, [](const CMatrix& h) { return CMatrix(-h); }}};
  if (rq > 0)
    terms.push_back({g, [vq](const CMatrix& h) { return CMatrix(-(vq.adjoint() * h * vq)); }});
  prob.add_operator_equality(terms, CMatrix::Zero(dAB, dAB), dAB);

  // tr_A E = 1_B
  prob.add_operator_equality(
      {{e, [dA](const CMatrix& q) { return kron(CMatrix::Identity(dA, dA), q); }}},
      CMatrix::Identity(dB, dB), dB);

  if (trace_pin) prob.add_equality({{s, CMatrix::Identity(dA, dA)}}, *trace_pin);

  SdpSolution sol = solve(prob, opts);
  if (sol.ok() && f_raw) {
    *f_raw = kron(sol.X[s], CMatrix::Identity(dB, dB)) - sol.X[e];
  }
  return sol;
}

// min tr T over Hermitian F with F <= 1 (x) T, tr_B F >= 1_A and F
// negative semidefinite on the complement of the support.  F is eliminated
// through its slack M = 1 (x) T - F, which leaves no unbounded directions
// beyond the penalized T split:
//   M1 = (tr T) 1_A - tr_B M - 1_A >= 0,
//   M3 = V^dag (M - 1 (x) T) V >= 0        (V spanning ker P).
SdpSolution upsilon_full_dual(const NCGraph& k, const SolveOptions& opts) {
  const int dA = k.d_A, dB = k.d_B, dAB = dA * dB;
  const CMatrix vq = projector_basis(k.P.mat(), /*range=*/false);
  const int rq = static_cast<int>(vq.cols());

  SdpProblem prob;
  const int tp = prob.add_block("T+", dB, BlockKind::hermitian);
  const int tm = prob.add_block("T-", dB, BlockKind::hermitian);
  const int m2 = prob.add_block("M2", dAB, BlockKind::hermitian);
  const int m1 = prob.add_block("M1", dA, BlockKind::hermitian);
  const int m3 = rq > 0 ? prob.add_block("M3", rq, BlockKind::hermitian) : -1;
  prob.set_objective(tp, (1.0 + kSplitPenalty) * CMatrix::Identity(dB, dB));
  prob.set_objective(tm, (-1.0 + kSplitPenalty) * CMatrix::Identity(dB, dB));

  // M1 - (tr T) 1_A + tr_B M2 = -1_A
  prob.add_operator_equality(
      {{m1, [](const CMatrix& g) { return g; }},
       {tp, [dB](const CMatrix& g) { return CMatrix(-g.trace() * CMatrix::Identity(dB, dB)); }},
       {tm, [dB](const CMatrix& g) { return CMatrix(g.trace() * CMatrix::Identity(dB, dB)); }},
       {m2, [dB](const CMatrix& g) { return kron(g, CMatrix::Identity(dB, dB)); }}},
      -CMatrix::Identity(dA, dA), dA);

  // M3 - V^dag M2 V + V^dag (1 (x) (T+ - T-)) V = 0
  if (rq > 0) {
    const auto lift_t = [vq, dA, dB](const CMatrix& h, double sign) {
      const CMatrix lifted = vq * h * vq.adjoint();
      return CMatrix(sign * partial_trace_raw(lifted, {dA, dB}, {1}));
    };
    prob.add_operator_equality(
        {{m3, [](const CMatrix& h) { return h; }},
         {m2, [vq](const CMatrix& h) { return CMatrix(-(vq * h * vq.adjoint())); }},
         {tp, [lift_t](const CMatrix& h) { return lift_t(h, 1.0); }},
         {tm, [lift_t](const CMatrix& h) { return lift_t(h, -1.0); }}},
        CMatrix::Zero(rq, rq), rq);
  }

  return solve(prob, opts);
}

// Reduced program over {s_i, R_i}: max sum s_i with
// 0 <= R_i <= s_i(1 - P_i) and sum_i (s_i P_i + R_i) = 1.
SdpSolution upsilon_cq_primal(const NCGraph& k, const SolveOptions& opts,
                              std::optional<double> trace_pin, CMatrix* e_full) {
  const auto& proj = *k.cq;
  const int n = k.d_A, dB = k.d_B;
  std::vector<CMatrix> vker(n);
  std::vector<int> q(n);
  for (int i = 0; i < n; ++i) {
    vker[i] = projector_basis(proj[i], /*range=*/false);
    q[i] = static_cast<int>(vker[i].cols());
  }

  SdpProblem prob;
  prob.set_maximize(!trace_pin.has_value());
  const int s = prob.add_block("s", n, BlockKind::diagonal);
  if (!trace_pin) prob.set_objective(s, CMatrix::Identity(n, n));
  std::vector<int> rhat(n, -1), ghat(n, -1);
  for (int i = 0; i < n; ++i) {
    if (q[i] == 0) continue;
    rhat[i] = prob.add_block("Rhat" + std::to_string(i), q[i], BlockKind::hermitian);
    ghat[i] = prob.add_block("Ghat" + std::to_string(i), q[i], BlockKind::hermitian);
    // Ghat_i + Rhat_i - s_i 1 = 0
    prob.add_operator_equality(
        {{ghat[i], [](const CMatrix& h) { return h; }},
         {rhat[i], [](const CMatrix& h) { return h; }},
         {s, [i, n](const CMatrix& h) {
            CMatrix c = CMatrix::Zero(n, n);
            c(i, i) = -h.trace();
            return c;
          }}},
        CMatrix::Zero(q[i], q[i]), q[i]);
  }

  // sum_i (s_i P_i + V_i Rhat_i V_i^dag) = 1_B
  std::vector<std::pair<int, SdpProblem::AdjointFn>> terms;
  terms.push_back({s, [proj, n](const CMatrix& h) {
                     CMatrix c = CMatrix::Zero(n, n);
                     for (int i = 0; i < n; ++i) c(i, i) = hs_dot(h, proj[i]);
                     return c;
                   }});
  for (int i = 0; i < n; ++i)
    if (q[i] > 0)
      terms.push_back({rhat[i], [v = vker[i]](const CMatrix& h) { return CMatrix(v.adjoint() * h * v); }});
  prob.add_operator_equality(terms, CMatrix::Identity(dB, dB), dB);

  if (trace_pin) prob.add_equality({{s, CMatrix::Identity(n, n)}}, *trace_pin);

  SdpSolution sol = solve(prob, opts);
  if (sol.ok() && e_full) {
    // E = sum_i |i><i| (x) (s_i P_i + R_i)
    CMatrix e = CMatrix::Zero(n * dB, n * dB);
    for (int i = 0; i < n; ++i) {
      CMatrix ei = sol.X[s](i, i).real() * proj[i];
      if (q[i] > 0) ei += vker[i] * sol.X[rhat[i]] * vker[i].adjoint();
      e.block(i * dB, i * dB, dB, dB) = ei;
    }
    *e_full = e;
  }
  return sol;
}

// Dual of the reduced program, with the multiplier of the kernel-space
// constraint compressed onto ker P_i:
//   min tr T  s.t.  Theta_i >= 0,  V_i^dag T V_i + Theta_i >= 0,
//                   <T, P_i> - tr Theta_i >= 1.
SdpSolution upsilon_cq_dual(const NCGraph& k, const SolveOptions& opts) {
  const auto& proj = *k.cq;
  const int n = k.d_A, dB = k.d_B;

  SdpProblem prob;
  const int tp = prob.add_block("T+", dB, BlockKind::hermitian);
  const int tm = prob.add_block("T-", dB, BlockKind::hermitian);
  const int v = prob.add_block("v", n, BlockKind::diagonal);
  prob.set_objective(tp, (1.0 + kSplitPenalty) * CMatrix::Identity(dB, dB));
  prob.set_objective(tm, (-1.0 + kSplitPenalty) * CMatrix::Identity(dB, dB));
  for (int i = 0; i < n; ++i) {
    const CMatrix vq = projector_basis(proj[i], /*range=*/false);
    const int q = static_cast<int>(vq.cols());
    CMatrix ei = CMatrix::Zero(n, n);
    ei(i, i) = -1.0;
    if (q == 0) {
      prob.add_equality({{tp, proj[i]}, {tm, -proj[i]}, {v, ei}}, 1.0);
      continue;
    }
    const int th = prob.add_block("Theta" + std::to_string(i), q, BlockKind::hermitian);
    const int xi = prob.add_block("Xi" + std::to_string(i), q, BlockKind::hermitian);
    // Xi_i - V^dag (T+ - T-) V - Theta_i = 0
    const auto t_comp = [vq](const CMatrix& h, double sign) {
      const CMatrix lifted = vq * h * vq.adjoint();
      return CMatrix(sign * lifted);
    };
    prob.add_operator_equality(
        {{xi, [](const CMatrix& h) { return h; }},
         {tp, [t_comp](const CMatrix& h) { return t_comp(h, -1.0); }},
         {tm, [t_comp](const CMatrix& h) { return t_comp(h, 1.0); }},
         {th, [](const CMatrix& h) { return CMatrix(-h); }}},
        CMatrix::Zero(q, q), q);
    // <T, P_i> - tr Theta_i - v_i = 1
    prob.add_equality(
        {{tp, proj[i]}, {tm, -proj[i]}, {th, -CMatrix::Identity(q, q)}, {v, ei}}, 1.0);
  }
  return solve(prob, opts);
}

}  // namespace

QuantityResult upsilon_full(const NCGraph& k, const SolveOptions& opts) {
  CMatrix f_raw;
  const SdpSolution primal = upsilon_full_primal(k, opts, std::nullopt, &f_raw);
  const SdpSolution dual = upsilon_full_dual(k, opts);
  QuantityResult r = combine(primal, dual, Rounding::floor);
  if (primal.ok()) {
    r.primal_witnesses.emplace("S", herm(primal.X[0], {k.d_A}));
    r.primal_witnesses.emplace("E", herm(primal.X[1], {k.d_A, k.d_B}));
    r.primal_witnesses.emplace("F_raw", herm(hermitized(f_raw), {k.d_A, k.d_B}));
  }
  if (dual.ok()) {
    const CMatrix t = dual.X[0] - dual.X[1];
    r.dual_witnesses.emplace("T", herm(t, {k.d_B}));
    const CMatrix f = kron(CMatrix::Identity(k.d_A, k.d_A), t) - dual.X[2];
    r.dual_witnesses.emplace("F", herm(f, {k.d_A, k.d_B}));
  }
  return r;
}

QuantityResult upsilon(const NCGraph& k, const SolveOptions& opts) {
  if (!k.is_cq()) return upsilon_full(k, opts);
  CMatrix e_full;
  const SdpSolution primal = upsilon_cq_primal(k, opts, std::nullopt, &e_full);
  const SdpSolution dual = upsilon_cq_dual(k, opts);
  QuantityResult r = combine(primal, dual, Rounding::floor);
  if (primal.ok()) {
    r.primal_witnesses.emplace("S", herm(primal.X[0], {k.d_A}));
    r.primal_witnesses.emplace("E", herm(hermitized(e_full), {k.d_A, k.d_B}));
    const CMatrix f =
        kron(primal.X[0], CMatrix::Identity(k.d_B, k.d_B)) - e_full;
    r.primal_witnesses.emplace("F_raw", herm(hermitized(f), {k.d_A, k.d_B}));
  }
  if (dual.ok()) r.dual_witnesses.emplace("T", herm(dual.X[0] - dual.X[1], {k.d_B}));
  return r;
}

QuantityResult upsilon_with_trace(const NCGraph& k, double m, const SolveOptions& opts) {
  CMatrix e_full, f_raw;
  SdpSolution sol;
  if (k.is_cq()) {
    sol = upsilon_cq_primal(k, opts, m, &e_full);
    if (sol.ok()) f_raw = kron(sol.X[0], CMatrix::Identity(k.d_B, k.d_B)) - e_full;
  } else {
    sol = upsilon_full_primal(k, opts, m, &f_raw);
    if (sol.ok()) e_full = sol.X[1];
  }
  if (sol.status == SdpStatus::infeasible) {
    std::ostringstream os;
    os << "upsilon_with_trace: no code with " << m << " messages (exceeds the independence number)";
    throw infeasible_error(os.str());
  }
  if (!sol.ok()) throw solver_error("upsilon_with_trace: solver returned " + to_string(sol.status));
  QuantityResult r;
  r.value = m;
  r.integer_part = rounded(m, Rounding::floor);
  r.status = sol.status;
  r.primal_witnesses.emplace("S", herm(sol.X[0], {k.d_A}));
  r.primal_witnesses.emplace("E", herm(hermitized(e_full), {k.d_A, k.d_B}));
  r.primal_witnesses.emplace("F_raw", herm(hermitized(f_raw), {k.d_A, k.d_B}));
  return r;
}

// ------------------------------- Sigma ---------------------------------------

namespace {

// min tr T  s.t.  0 <= F <= 1 (x) T,  tr_B F = 1_A,  F supported on P.
SdpSolution sigma_full_primal(const NCGraph& k, const SolveOptions& opts, CMatrix* f_full) {
  const int dA = k.d_A, dB = k.d_B, dAB = dA * dB;
  const CMatrix vp = projector_basis(k.P.mat(), /*range=*/true);
  const int rp = static_cast<int>(vp.cols());

  SdpProblem prob;
  const int t = prob.add_block("T", dB, BlockKind::hermitian);
  const int f = prob.add_block("Fhat", rp, BlockKind::hermitian);
  const int h = prob.add_block("H", dAB, BlockKind::hermitian);
  prob.set_objective(t, CMatrix::Identity(dB, dB));

  // H + Vp Fhat Vp^dag - 1 (x) T = 0
  prob.add_operator_equality(
      {{h, [](const CMatrix& g) { return g; }},
       {f, [vp](const CMatrix& g) { return CMatrix(vp.adjoint() * g * vp); }},
       {t, [dims = Dims{dA, dB}](const CMatrix& g) { return CMatrix(-partial_trace_raw(g, dims, {1})); }}},
      CMatrix::Zero(dAB, dAB), dAB);

  // tr_B (Vp Fhat Vp^dag) = 1_A
  prob.add_operator_equality(
      {{f, [vp, dB](const CMatrix& g) {
          return CMatrix(vp.adjoint() * kron(g, CMatrix::Identity(dB, dB)) * vp);
        }}},
      CMatrix::Identity(dA, dA), dA);

  SdpSolution sol = solve(prob, opts);
  if (sol.ok() && f_full) *f_full = hermitized(vp * sol.X[f] * vp.adjoint());
  return sol;
}

// max tr S  s.t.  0 <= E,  tr_A E = 1_B,  P(S (x) 1 - E)P <= 0.
SdpSolution sigma_full_dual(const NCGraph& k, const SolveOptions& opts) {
  const int dA = k.d_A, dB = k.d_B;
  const CMatrix vp = projector_basis(k.P.mat(), /*range=*/true);
  const int rp = static_cast<int>(vp.cols());

  SdpProblem prob;
  prob.set_maximize(true);
  const int sp = prob.add_block("S+", dA, BlockKind::hermitian);
  const int sm = prob.add_block("S-", dA, BlockKind::hermitian);
  const int e = prob.add_block("E", dA * dB, BlockKind::hermitian);
  const int h = prob.add_block("Hhat", rp, BlockKind::hermitian);
  prob.set_objective(sp, (1.0 - kSplitPenalty) * CMatrix::Identity(dA, dA));
  prob.set_objective(sm, (-1.0 - kSplitPenalty) * CMatrix::Identity(dA, dA));

  // Hhat - V^dag E V + V^dag ((S+ - S-) (x) 1) V = 0
  const auto s_adj = [vp, dB, dA](const CMatrix& g, double sign) {
    const CMatrix lifted = vp * g * vp.adjoint();
    return CMatrix(sign * partial_trace_raw(lifted, {dA, dB}, {0}));
  };
  prob.add_operator_equality(
      {{h, [](const CMatrix& g) { return g; }},
       {e, [vp](const CMatrix& g) { return CMatrix(-(vp * g * vp.adjoint())); }},
       {sp, [s_adj](const CMatrix& g) { return s_adj(g, 1.0); }},
       {sm, [s_adj](const CMatrix& g) { return s_adj(g, -1.0); }}},
      CMatrix::Zero(rp, rp), rp);

  // tr_A E = 1_B
  prob.add_operator_equality(
      {{e, [dA](const CMatrix& q) { return kron(CMatrix::Identity(dA, dA), q); }}},
      CMatrix::Identity(dB, dB), dB);

  return solve(prob, opts);
}

// min tr T  s.t.  T >= F_i,  0 <= F_i <= P_i,  tr F_i = 1.
SdpSolution sigma_cq_primal(const NCGraph& k, const SolveOptions& opts, CMatrix* f_full,
                            CMatrix* t_out) {
  const auto& proj = *k.cq;
  const int n = k.d_A, dB = k.d_B;

  SdpProblem prob;
  const int t = prob.add_block("T", dB, BlockKind::hermitian);
  prob.set_objective(t, CMatrix::Identity(dB, dB));
  std::vector<int> fhat(n), ri(n);
  std::vector<CMatrix> vp(n);
  for (int i = 0; i < n; ++i) {
    vp[i] = projector_basis(proj[i], /*range=*/true);
    ri[i] = static_cast<int>(vp[i].cols());
    fhat[i] = prob.add_block("Fhat" + std::to_string(i), ri[i], BlockKind::hermitian);
    const int g = prob.add_block("Ghat" + std::to_string(i), ri[i], BlockKind::hermitian);
    const int h = prob.add_block("H" + std::to_string(i), dB, BlockKind::hermitian);
    // Ghat_i + Fhat_i = 1
    prob.add_operator_equality({{g, [](const CMatrix& q) { return q; }},
                                {fhat[i], [](const CMatrix& q) { return q; }}},
                               CMatrix::Identity(ri[i], ri[i]), ri[i]);
    // H_i + V_i Fhat_i V_i^dag - T = 0
    prob.add_operator_equality({{h, [](const CMatrix& q) { return q; }},
                                {fhat[i], [v = vp[i]](const CMatrix& q) {
                                   return CMatrix(v.adjoint() * q * v);
                                 }},
                                {t, [](const CMatrix& q) { return CMatrix(-q); }}},
                               CMatrix::Zero(dB, dB), dB);
    // tr Fhat_i = 1
    prob.add_equality({{fhat[i], CMatrix::Identity(ri[i], ri[i])}}, 1.0);
  }

  SdpSolution sol = solve(prob, opts);
  if (sol.ok()) {
    if (t_out) *t_out = sol.X[t];
    if (f_full) {
      CMatrix f = CMatrix::Zero(n * dB, n * dB);
      for (int i = 0; i < n; ++i)
        f.block(i * dB, i * dB, dB, dB) = hermitized(vp[i] * sol.X[fhat[i]] * vp[i].adjoint());
      *f_full = f;
    }
  }
  return sol;
}

// max sum s_i  s.t.  s_i P_i <= P_i E_i P_i,  0 <= E_i,  sum E_i = 1.
SdpSolution sigma_cq_dual(const NCGraph& k, const SolveOptions& opts) {
  const auto& proj = *k.cq;
  const int n = k.d_A, dB = k.d_B;

  SdpProblem prob;
  prob.set_maximize(true);
  const int s = prob.add_block("s", n, BlockKind::diagonal);
  prob.set_objective(s, CMatrix::Identity(n, n));
  std::vector<std::pair<int, SdpProblem::AdjointFn>> sum_terms;
  for (int i = 0; i < n; ++i) {
    const CMatrix v = projector_basis(proj[i], /*range=*/true);
    const int r = static_cast<int>(v.cols());
    const int e = prob.add_block("E" + std::to_string(i), dB, BlockKind::hermitian);
    const int h = prob.add_block("Hhat" + std::to_string(i), r, BlockKind::hermitian);
    // Hhat_i + s_i 1 - V^dag E_i V = 0
    prob.add_operator_equality(
        {{h, [](const CMatrix& q) { return q; }},
         {s, [i, n](const CMatrix& q) {
            CMatrix c = CMatrix::Zero(n, n);
            c(i, i) = q.trace();
            return c;
          }},
         {e, [v](const CMatrix& q) { return CMatrix(-(v * q * v.adjoint())); }}},
        CMatrix::Zero(r, r), r);
    sum_terms.push_back({e, [](const CMatrix& q) { return q; }});
  }
  prob.add_operator_equality(sum_terms, CMatrix::Identity(dB, dB), dB);
  return solve(prob, opts);
}

}  // namespace

QuantityResult sigma_graph_full(const NCGraph& k, const SolveOptions& opts) {
  CMatrix f_full;
  const SdpSolution primal = sigma_full_primal(k, opts, &f_full);
  const SdpSolution dual = sigma_full_dual(k, opts);
  QuantityResult r = combine(primal, dual, Rounding::ceil);
  if (primal.ok()) {
    r.primal_witnesses.emplace("T", herm(primal.X[0], {k.d_B}));
    r.primal_witnesses.emplace("F", herm(f_full, {k.d_A, k.d_B}));
  }
  if (dual.ok()) {
    r.dual_witnesses.emplace("S", herm(dual.X[0] - dual.X[1], {k.d_A}));
    r.dual_witnesses.emplace("E", herm(dual.X[2], {k.d_A, k.d_B}));
  }
  return r;
}

QuantityResult sigma_graph(const NCGraph& k, const SolveOptions& opts) {
  if (!k.is_cq()) return sigma_graph_full(k, opts);
  CMatrix f_full, t_mat;
  const SdpSolution primal = sigma_cq_primal(k, opts, &f_full, &t_mat);
  const SdpSolution dual = sigma_cq_dual(k, opts);
  QuantityResult r = combine(primal, dual, Rounding::ceil);
  if (primal.ok()) {
    r.primal_witnesses.emplace("T", herm(t_mat, {k.d_B}));
    r.primal_witnesses.emplace("F", herm(f_full, {k.d_A, k.d_B}));
  }
  return r;
}

QuantityResult sigma_channel(const Channel& n, const SolveOptions& opts) {
  const int dA = n.d_in, dB = n.d_out, dAB = dA * dB;
  const CMatrix j = n.choi.mat();

  // primal: min tr T s.t. 1 (x) T - J >= 0
  SdpProblem primal;
  const int t = primal.add_block("T", dB, BlockKind::hermitian);
  const int h = primal.add_block("H", dAB, BlockKind::hermitian);
  primal.set_objective(t, CMatrix::Identity(dB, dB));
  primal.add_operator_equality(
      {{h, [](const CMatrix& g) { return g; }},
       {t, [dims = Dims{dA, dB}](const CMatrix& g) { return CMatrix(-partial_trace_raw(g, dims, {1})); }}},
      CMatrix(-j), dAB);
  const SdpSolution psol = solve(primal, opts);

  // dual: max <J, E> s.t. E >= 0, tr_A E = 1_B
  SdpProblem dual;
  dual.set_maximize(true);
  const int e = dual.add_block("E", dAB, BlockKind::hermitian);
  dual.set_objective(e, j);
  dual.add_operator_equality(
      {{e, [dA](const CMatrix& q) { return kron(CMatrix::Identity(dA, dA), q); }}},
      CMatrix::Identity(dB, dB), dB);
  const SdpSolution dsol = solve(dual, opts);

  QuantityResult r = combine(psol, dsol, Rounding::ceil);
  if (psol.ok()) r.primal_witnesses.emplace("T", herm(psol.X[t], {dB}));
  if (dsol.ok()) r.dual_witnesses.emplace("E", herm(dsol.X[e], {dA, dB}));
  return r;
}

// ---------------------------- packing numbers --------------------------------

namespace {

// Shared shape of the packing-number programs:
//   max tr S  s.t.  S >= 0,  map(S) <= 1_B     (primal)
//   min tr T  s.t.  T >= 0,  adj(T) >= 1_A     (dual)
// where map/adj are the sandwiched partial-trace maps of P.
QuantityResult packing_pair(int dA, int dB, const SdpProblem::AdjointFn& primal_coeff,
                            const SdpProblem::AdjointFn& dual_coeff, const SolveOptions& opts) {
  SdpProblem primal;
  primal.set_maximize(true);
  const int s = primal.add_block("S", dA, BlockKind::hermitian);
  const int y = primal.add_block("Y", dB, BlockKind::hermitian);
  primal.set_objective(s, CMatrix::Identity(dA, dA));
  primal.add_operator_equality({{y, [](const CMatrix& q) { return q; }}, {s, primal_coeff}},
                               CMatrix::Identity(dB, dB), dB);
  const SdpSolution psol = solve(primal, opts);

  SdpProblem dual;
  const int t = dual.add_block("T", dB, BlockKind::hermitian);
  const int z = dual.add_block("Z", dA, BlockKind::hermitian);
  dual.set_objective(t, CMatrix::Identity(dB, dB));
  dual.add_operator_equality({{z, [](const CMatrix& g) { return g; }},
                              {t, [dual_coeff](const CMatrix& g) { return CMatrix(-dual_coeff(g)); }}},
                             -CMatrix::Identity(dA, dA), dA);
  const SdpSolution dsol = solve(dual, opts);

  QuantityResult r = combine(psol, dsol, Rounding::floor);
  if (psol.ok()) r.primal_witnesses.emplace("S", herm(psol.X[s], {dA}));
  if (dsol.ok()) r.dual_witnesses.emplace("T", herm(dsol.X[t], {dB}));
  return r;
}

}  // namespace

QuantityResult aram(const NCGraph& k, const SolveOptions& opts) {
  const CMatrix pm = k.P.mat();
  const Dims dims = {k.d_A, k.d_B};
  // <q, tr_A[P (S (x) 1)]> = <tr_B[P (1 (x) q)], S>
  const auto primal_coeff = [pm, dims, dA = k.d_A](const CMatrix& q) {
    return CMatrix(hermitized(
        partial_trace_raw(pm * kron(CMatrix::Identity(dA, dA), q), dims, {0})));
  };
  const auto dual_coeff = [pm, dims, dB = k.d_B](const CMatrix& g) {
    return CMatrix(hermitized(
        partial_trace_raw(pm * kron(g, CMatrix::Identity(dB, dB)), dims, {1})));
  };
  return packing_pair(k.d_A, k.d_B, primal_coeff, dual_coeff, opts);
}

QuantityResult aram_tilde(const NCGraph& k, const SolveOptions& opts) {
  const CMatrix pm = k.P.mat();
  const Dims dims = {k.d_A, k.d_B};
  const auto primal_coeff = [pm, dims, dA = k.d_A](const CMatrix& q) {
    return CMatrix(hermitized(
        partial_trace_raw(pm * kron(CMatrix::Identity(dA, dA), q) * pm, dims, {0})));
  };
  const auto dual_coeff = [pm, dims, dB = k.d_B](const CMatrix& g) {
    return CMatrix(hermitized(
        partial_trace_raw(pm * kron(g, CMatrix::Identity(dB, dB)) * pm, dims, {1})));
  };
  return packing_pair(k.d_A, k.d_B, primal_coeff, dual_coeff, opts);
}

QuantityResult aram_hat(const NCGraph& k, const SolveOptions& opts) {
  if (k.kraus_basis.empty()) throw spec_error("aram_hat: graph carries no Kraus basis");
  const auto& basis = k.kraus_basis;
  const int dA = k.d_A, dB = k.d_B;
  const auto fwd = [&basis, dB](const CMatrix& rho) {
    CMatrix out = CMatrix::Zero(dB, dB);
    for (const auto& e : basis) out += e * rho * e.adjoint();
    return out;
  };
  const auto bwd = [&basis, dA](const CMatrix& sig) {
    CMatrix out = CMatrix::Zero(dA, dA);
    for (const auto& e : basis) out += e.adjoint() * sig * e;
    return out;
  };

  // min t s.t. N(rho) <= t 1, tr rho = 1, rho >= 0
  SdpProblem primal;
  const int t = primal.add_block("t", 1, BlockKind::diagonal);
  const int rho = primal.add_block("rho", dA, BlockKind::hermitian);
  const int h = primal.add_block("H", dB, BlockKind::hermitian);
  primal.set_objective(t, CMatrix::Identity(1, 1));
  primal.add_operator_equality(
      {{h, [](const CMatrix& q) { return q; }},
       {rho, [bwd](const CMatrix& q) { return CMatrix(hermitized(bwd(q))); }},
       {t, [](const CMatrix& q) { return CMatrix(-q.trace() * CMatrix::Identity(1, 1)); }}},
      CMatrix::Zero(dB, dB), dB);
  primal.add_equality({{rho, CMatrix::Identity(dA, dA)}}, 1.0);
  const SdpSolution psol = solve(primal, opts);

  // max s s.t. N^dag(sigma) >= s 1, tr sigma = 1, sigma >= 0
  SdpProblem dual;
  dual.set_maximize(true);
  const int s = dual.add_block("s", 1, BlockKind::diagonal);
  const int sig = dual.add_block("sigma", dB, BlockKind::hermitian);
  const int z = dual.add_block("Z", dA, BlockKind::hermitian);
  dual.set_objective(s, CMatrix::Identity(1, 1));
  dual.add_operator_equality(
      {{z, [](const CMatrix& g) { return g; }},
       {sig, [fwd](const CMatrix& g) { return CMatrix(-hermitized(fwd(g))); }},
       {s, [](const CMatrix& g) { return CMatrix(g.trace() * CMatrix::Identity(1, 1)); }}},
      CMatrix::Zero(dA, dA), dA);
  dual.add_equality({{sig, CMatrix::Identity(dB, dB)}}, 1.0);
  const SdpSolution dsol = solve(dual, opts);

  QuantityResult r = combine(psol, dsol, Rounding::floor);
  if (psol.ok()) r.primal_witnesses.emplace("rho", herm(psol.X[rho], {dA}));
  if (dsol.ok()) r.dual_witnesses.emplace("sigma", herm(dsol.X[sig], {dB}));
  return r;
}

QuantityResult fractional_packing(const RMatrix& support, const SolveOptions& opts) {
  const int nx = static_cast<int>(support.rows());
  const int ny = static_cast<int>(support.cols());
  RMatrix gamma = RMatrix::Zero(nx, ny);
  for (int x = 0; x < nx; ++x) {
    bool any = false;
    for (int y = 0; y < ny; ++y)
      if (support(x, y) > 0.0) {
        gamma(x, y) = 1.0;
        any = true;
      }
    if (!any) {
      std::ostringstream os;
      os << "fractional_packing: input " << x << " has no outgoing edge";
      throw spec_error(os.str());
    }
  }

  // packing: max sum p_x s.t. sum_x p_x Gamma(y|x) <= 1, 0 <= p_x <= 1
  SdpProblem packing;
  packing.set_maximize(true);
  const int p = packing.add_block("p", nx, BlockKind::diagonal);
  const int u = packing.add_block("u", nx, BlockKind::diagonal);
  const int v = packing.add_block("v", ny, BlockKind::diagonal);
  packing.set_objective(p, CMatrix::Identity(nx, nx));
  for (int x = 0; x < nx; ++x) {
    CMatrix ex = CMatrix::Zero(nx, nx);
    ex(x, x) = 1.0;
    packing.add_equality({{p, ex}, {u, ex}}, 1.0);
  }
  for (int y = 0; y < ny; ++y) {
    CMatrix row = CMatrix::Zero(nx, nx);
    for (int x = 0; x < nx; ++x) row(x, x) = gamma(x, y);
    CMatrix ey = CMatrix::Zero(ny, ny);
    ey(y, y) = 1.0;
    packing.add_equality({{p, row}, {v, ey}}, 1.0);
  }
  const SdpSolution psol = solve(packing, opts);

  // covering: min sum q_y s.t. sum_y q_y Gamma(y|x) >= 1, q_y >= 0
  SdpProblem covering;
  const int q = covering.add_block("q", ny, BlockKind::diagonal);
  const int w = covering.add_block("w", nx, BlockKind::diagonal);
  covering.set_objective(q, CMatrix::Identity(ny, ny));
  for (int x = 0; x < nx; ++x) {
    CMatrix row = CMatrix::Zero(ny, ny);
    for (int y = 0; y < ny; ++y) row(y, y) = gamma(x, y);
    CMatrix ex = CMatrix::Zero(nx, nx);
    ex(x, x) = -1.0;
    covering.add_equality({{q, row}, {w, ex}}, 1.0);
  }
  const SdpSolution dsol = solve(covering, opts);

  QuantityResult r = combine(psol, dsol, Rounding::floor);
  if (psol.ok()) r.primal_witnesses.emplace("p", herm(psol.X[p]));
  if (dsol.ok()) r.dual_witnesses.emplace("q", herm(dsol.X[q]));
  return r;
}

QuantityResult lovasz_theta(const Graph& g, const SolveOptions& opts) {
  const int n = g.n;
  if (n <= 0) throw spec_error("lovasz_theta: empty graph");
  std::vector<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
  const int ne = static_cast<int>(edges.size());

  // primal: max <J, X> s.t. tr X = 1, X_ij = 0 on edges, X >= 0
  SdpProblem primal;
  primal.set_maximize(true);
  const int x = primal.add_block("X", n, BlockKind::hermitian);
  primal.set_objective(x, CMatrix::Ones(n, n));
  primal.add_equality({{x, CMatrix::Identity(n, n)}}, 1.0);
  std::vector<CMatrix> sym(ne), asym(ne);
  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = edges[e];
    sym[e] = CMatrix::Zero(n, n);
    sym[e](i, j) = sym[e](j, i) = 1.0;
    asym[e] = CMatrix::Zero(n, n);
    asym[e](i, j) = Complex(0, 1);
    asym[e](j, i) = Complex(0, -1);
    primal.add_equality({{x, sym[e]}}, 0.0);
    primal.add_equality({{x, asym[e]}}, 0.0);
  }
  const SdpSolution psol = solve(primal, opts);

  // dual: min t s.t. t 1 + sum_e (a_e Sym_e + b_e Asym_e) - J >= 0
  SdpProblem dual;
  const int t = dual.add_block("t", 1, BlockKind::diagonal);
  const int y = dual.add_block("Y", n, BlockKind::hermitian);
  const int ap = ne ? dual.add_block("a+", 2 * ne, BlockKind::diagonal) : -1;
  const int am = ne ? dual.add_block("a-", 2 * ne, BlockKind::diagonal) : -1;
  dual.set_objective(t, CMatrix::Identity(1, 1));
  if (ne) {
    dual.set_objective(ap, kSplitPenalty * CMatrix::Identity(2 * ne, 2 * ne));
    dual.set_objective(am, kSplitPenalty * CMatrix::Identity(2 * ne, 2 * ne));
  }
  std::vector<std::pair<int, SdpProblem::AdjointFn>> terms = {
      {y, [](const CMatrix& h) { return h; }},
      {t, [](const CMatrix& h) { return CMatrix(-h.trace() * CMatrix::Identity(1, 1)); }}};
  if (ne) {
    const auto edge_coeff = [&sym, &asym, ne](const CMatrix& h, double sign) {
      CMatrix c = CMatrix::Zero(2 * ne, 2 * ne);
      for (int e = 0; e < ne; ++e) {
        c(2 * e, 2 * e) = sign * hs_dot(sym[e], h);
        c(2 * e + 1, 2 * e + 1) = sign * hs_dot(asym[e], h);
      }
      return c;
    };
    terms.push_back({ap, [edge_coeff](const CMatrix& h) { return edge_coeff(h, -1.0); }});
    terms.push_back({am, [edge_coeff](const CMatrix& h) { return edge_coeff(h, 1.0); }});
  }
  dual.add_operator_equality(terms, -CMatrix::Ones(n, n), n);
  const SdpSolution dsol = solve(dual, opts);

  QuantityResult r = combine(psol, dsol, Rounding::floor);
  if (psol.ok()) r.primal_witnesses.emplace("X", herm(psol.X[x]));
  if (dsol.ok()) r.dual_witnesses.emplace("Y", herm(dsol.X[y]));
  return r;
}

// ------------------------------ closed forms ---------------------------------

double cmin_e_two_state(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw spec_error("cmin_e_two_state: alpha outside (0, 1]");
  return binary_entropy(alpha * alpha);
}

double cmin_e_amplitude_damping(double r) {
  if (r < 0.0 || r > 1.0) throw spec_error("cmin_e_amplitude_damping: r outside [0, 1]");
  const auto f = [r](double p) {
    return binary_entropy(p) + binary_entropy(r * p) - binary_entropy((1.0 - r) * p);
  };
  // coarse scan, then golden-section refinement to a 1e-9 bracket
  double lo = 0.0, hi = 1.0, best = 0.0, fbest = f(0.0);
  const int grid = 2048;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double v = f(x);
    if (v > fbest) {
      fbest = v;
      best = x;
    }
  }
  lo = std::max(0.0, best - 1.0 / grid);
  hi = std::min(1.0, best + 1.0 / grid);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-9) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

double superdense_bound(const NCGraph& k) {
  const HermitianMatrix pb = partial_trace(k.P, {1});
  return k.d_A / max_eigenvalue(pb);
}

FeasibilityReport feasibility(const NCGraph& k) {
  FeasibilityReport report;
  const CMatrix q = CMatrix::Identity(k.d_A * k.d_B, k.d_A * k.d_B) - k.P.mat();
  const HermitianMatrix qb = partial_trace(herm(q, {k.d_A, k.d_B}), {1});
  report.eigenvalue_gap = min_eigenvalue(qb);
  report.positive_capacity = report.eigenvalue_gap > 1e-9;

  if (k.is_cq()) {
    CMatrix avg = CMatrix::Zero(k.d_B, k.d_B);
    for (const auto& p : *k.cq) avg += p;
    avg /= static_cast<double>(k.d_A);
    const Spectrum sp = spectrum(herm(avg));
    int common = 0;
    for (int i = 0; i < sp.eigenvalues.size(); ++i) {
      if (std::abs(sp.eigenvalues(i) - 1.0) <= 1e-9) {
        ++common;
        report.common_vector = sp.eigenvectors.col(i);
      }
    }
    report.cq_positive = (common == 0);
    if (!*report.cq_positive) report.positive_capacity = false;
  }
  return report;
}

TwoStateReport two_state_report(double alpha, int n) {
  const double beta2 = 1.0 - alpha * alpha;
  if (!(alpha > 1.0 / std::sqrt(2.0)) || !(alpha < 1.0))
    throw spec_error("two_state_report: need 1/sqrt(2) < alpha < 1");
  if (n < 1 || n > 10) throw spec_error("two_state_report: copies must lie in [1, 10]");
  const double beta = std::sqrt(beta2);

  TwoStateReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.copies = n;
  rep.upsilon = 1.0;
  rep.aram = 1.0 / (alpha * alpha);
  rep.sigma = 1.0 + 2.0 * alpha * beta;
  rep.cmin_e = binary_entropy(alpha * alpha);

  rep.condition_holds =
      n == 1 || std::pow(alpha, n) - std::pow(beta, n) <= std::sqrt((n - 1.0) / n) + 1e-12;
  if (!rep.condition_holds) return rep;

  // Materialize the ansatz witness and verify it numerically.
  const int dim = 1 << n;
  const double a2n = std::pow(alpha * alpha, n), b2n = std::pow(beta * beta, n);
  const double s = 1.0 / (dim * (a2n + b2n));

  const auto binom = [](int nn, int ww) {
    double v = 1.0;
    for (int i = 1; i <= ww; ++i) v = v * (nn - ww + i) / i;
    return v;
  };

  CVector psi0(2), perp(2);
  psi0 << alpha, beta;
  perp << beta, -alpha;
  CVector psi0n = CVector::Ones(1), perpn = CVector::Ones(1);
  for (int i = 0; i < n; ++i) {
    CVector t1(psi0n.size() * 2), t2(perpn.size() * 2);
    for (int j = 0; j < psi0n.size(); ++j)
      for (int b = 0; b < 2; ++b) {
        t1(j * 2 + b) = psi0n(j) * psi0(b);
        t2(j * 2 + b) = perpn(j) * perp(b);
      }
    psi0n = t1;
    perpn = t2;
  }

  const auto weight = [](int v) {
    int w = 0;
    while (v) {
      w += v & 1;
      v >>= 1;
    }
    return w;
  };

  CMatrix r0 = s * (perpn * perpn.adjoint());
  for (int w = 1; w <= n - 1; ++w) {
    const double bw = binom(n, w);
    const double cw = (a2n + b2n - std::pow(alpha, 2 * w) * std::pow(beta, 2 * (n - w)) -
                       std::pow(alpha, 2 * (n - w)) * std::pow(beta, 2 * w)) *
                      s / (1.0 - 1.0 / bw);
    CMatrix pw = CMatrix::Zero(dim, dim);
    CVector phiw = CVector::Zero(dim);
    for (int v = 0; v < dim; ++v)
      if (weight(v) == w) {
        pw(v, v) = 1.0;
        phiw(v) = 1.0 / std::sqrt(bw);
      }
    r0 += cw * (pw - phiw * phiw.adjoint());
  }

  const CMatrix p0 = psi0n * psi0n.adjoint();
  double residual = 0.0;
  residual = std::max(residual, -min_eigenvalue(herm(hermitized(r0))));
  residual = std::max(residual, -min_eigenvalue(herm(hermitized(
                                    s * (CMatrix::Identity(dim, dim) - p0) - r0))));

  // sum over sign flips Z^{i^n} (s P + R) Z^{i^n} = 1
  CMatrix total = CMatrix::Zero(dim, dim);
  const CMatrix base = s * p0 + r0;
  for (int v = 0; v < dim; ++v) {
    CMatrix conj = base;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const int sign = weight(v & r) + weight(v & c);
        if (sign & 1) conj(r, c) = -conj(r, c);
      }
    total += conj;
  }
  residual = std::max(residual, (total - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff());

  rep.witness_residual = residual;
  if (residual <= 1e-8) rep.ansatz_bound = 1.0 / (a2n + b2n);
  return rep;
}

}  // namespace zerocap
