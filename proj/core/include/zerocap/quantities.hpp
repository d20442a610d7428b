#pragma once

// The zero-error quantities: the no-signalling assisted independence number
// Upsilon, the semidefinite covering number Sigma (for graphs and channels),
// the semidefinite packing numbers A / A-tilde / A-hat, the fractional
// packing number alpha*, the Lovasz number, closed forms for the two-state
// and amplitude-damping families, and the feasibility predicates.
//
// Each SDP-backed quantity solves the primal and the dual as two independent
// problems and cross-checks the values; this doubles as a solver test.

#include <map>
#include <optional>
#include <string>

#include "zerocap/model.hpp"
#include "zerocap/sdp.hpp"

namespace zerocap {

struct QuantityResult {
  double value = 0.0;
  long long integer_part = 0;  // floor (capacities) or ceiling (costs), snap 1e-6
  std::map<std::string, HermitianMatrix> primal_witnesses;
  std::map<std::string, HermitianMatrix> dual_witnesses;
  double crosscheck_gap = 0.0;  // |primal - dual| from the independent solves
  SdpStatus status = SdpStatus::numerical;

  bool ok() const { return status == SdpStatus::optimal; }
};

// ------------------------------ SDP quantities -------------------------------

// No-signalling assisted independence number.  Uses the reduced cq program
// when a cq decomposition is present; upsilon_full always solves the
// projector formulation (the reduction is validated against it in tests).
QuantityResult upsilon(const NCGraph& k, const SolveOptions& opts = {});
QuantityResult upsilon_full(const NCGraph& k, const SolveOptions& opts = {});

// Re-solve of the capacity program with the extra equality tr S = m; used to
// materialize correlations at integer message counts.  Throws
// infeasible_error when m exceeds the independence number.
QuantityResult upsilon_with_trace(const NCGraph& k, double m, const SolveOptions& opts = {});

// One-shot simulation cost of a Kraus operator space (semidefinite covering
// number); integer_part is the ceiling.
QuantityResult sigma_graph(const NCGraph& k, const SolveOptions& opts = {});
QuantityResult sigma_graph_full(const NCGraph& k, const SolveOptions& opts = {});

// Simulation cost of a fixed channel: 2^{-Hmin(A|B)} of its Choi matrix.
QuantityResult sigma_channel(const Channel& n, const SolveOptions& opts = {});

// Semidefinite packing number and the symmetrized variant.
QuantityResult aram(const NCGraph& k, const SolveOptions& opts = {});
QuantityResult aram_tilde(const NCGraph& k, const SolveOptions& opts = {});

// A-hat = min over input states of the largest output eigenvalue; satisfies
// aram * aram_hat = 1.  Needs the Kraus basis of k.
QuantityResult aram_hat(const NCGraph& k, const SolveOptions& opts = {});

// Fractional packing number of a bipartite graph given by its transition
// support (entry (x, y) nonzero iff x -> y is an edge).  Solves the packing
// and covering LPs independently; the two values must agree.
QuantityResult fractional_packing(const RMatrix& support, const SolveOptions& opts = {});

QuantityResult lovasz_theta(const Graph& g, const SolveOptions& opts = {});

// ------------------------------- closed forms --------------------------------

struct TwoStateReport {
  double alpha = 0.0, beta = 0.0;
  int copies = 1;
  // single-copy closed forms
  double upsilon = 1.0;
  double aram = 0.0;     // 1/alpha^2
  double sigma = 0.0;    // 1 + 2 alpha beta
  double cmin_e = 0.0;   // binary entropy of (alpha^2, beta^2)
  // n-copy ansatz
  bool condition_holds = false;        // alpha^n - beta^n <= sqrt((n-1)/n)
  std::optional<double> ansatz_bound;  // (alpha^{2n} + beta^{2n})^{-1} when certified
  double witness_residual = 0.0;       // worst violation of the ansatz checks
};

// Closed forms of the two-pure-state cq family plus construction and
// numerical verification of the n-copy ansatz witness.
TwoStateReport two_state_report(double alpha, int n);

// Minimum entanglement-assisted capacity closed forms.
double cmin_e_two_state(double alpha);
double cmin_e_amplitude_damping(double r);

// d_A / ||tr_A P||_inf: superdense-coding lower bound on the packing number.
double superdense_bound(const NCGraph& k);

struct FeasibilityReport {
  bool positive_capacity = false;
  double eigenvalue_gap = 0.0;            // general path: lambda_min(tr_A(1-P))
  std::optional<bool> cq_positive;        // cq path verdict, when available
  std::optional<CVector> common_vector;   // cq path: certificate on infeasibility
};

// Whether the graph can carry any zero-error message under no-signalling
// assistance.  cq path: trivial intersection of the output supports; general
// path: tr_A(1-P) positive definite.  The two must agree when both apply.
FeasibilityReport feasibility(const NCGraph& k);

double binary_entropy(double p);

}  // namespace zerocap
