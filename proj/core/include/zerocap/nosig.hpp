#pragma once

// Quantum no-signalling correlations: two-input/two-output CPTP maps whose
// Choi matrix Omega satisfies linear constraints forbidding communication in
// either direction.  Builders turn SDP witnesses into explicit correlations
// realizing zero-error codes and channel simulations; compose() closes the
// loop by contracting a correlation with a channel.

#include <array>
#include <optional>
#include <string>

#include "zerocap/model.hpp"
#include "zerocap/quantities.hpp"

namespace zerocap {

// Choi matrix on the canonical factor order [A_i', A_o, B_i', B_o]: Alice's
// input reference, Alice's output, Bob's input reference, Bob's output.
struct NsCorrelation {
  std::array<int, 4> dims{};  // d_Ai, d_Ao, d_Bi, d_Bo
  HermitianMatrix omega;
  std::array<bool, 4> classical_ports{};
};

struct NsCheckReport {
  double cp_min_eigenvalue = 0.0;  // >= -1e-8 required
  double tp_residual = 0.0;        // ||tr_{Ao,Bo} Omega - 1||_inf
  double a_to_b_residual = 0.0;    // worst violation over a traceless basis
  double b_to_a_residual = 0.0;
  bool pass(double tol = 1e-8) const {
    return cp_min_eigenvalue >= -tol && tp_residual <= tol && a_to_b_residual <= tol &&
           b_to_a_residual <= tol;
  }
};

NsCheckReport check_ns(const NsCorrelation& omega);

// Correlation realizing an M-message zero-error code through any channel
// with Kraus operator space k.  Requires M <= floor(Upsilon(k)); the
// capacity program is re-solved with tr S = M to obtain exact weights.
// For M = 1 the correlation is the trivial one (no F block).
NsCorrelation build_capacity_ns(const NCGraph& k, int m, const SolveOptions& opts = {});

// Correlation simulating channel n from an M-message noiseless channel.
// Requires M >= ceil(sigma_channel(n)); the min-entropy witness T is padded
// so tr T = M.
NsCorrelation build_simulation_ns(const Channel& n, int m, const SolveOptions& opts = {});

// The unique map A_i -> B_o obtained by feeding omega's A_o output through n
// and returning n's output to omega's B_i port, evaluated as finite matrix
// algebra through the teleportation identity.
Channel compose(const NsCorrelation& omega, const Channel& n);

// Trace of a superoperator composition, tr(F o N), evaluated on an
// orthonormal basis of the shared space.
double superop_trace(const Channel& f, const Channel& n);

struct CodeReport {
  int messages = 0;
  NsCheckReport ns;
  double max_offdiagonal = 0.0;     // worst wrong-message probability
  double orthogonality = 0.0;       // |tr F conj(J)|
  std::string notes;
  bool zero_error(double tol = 1e-6) const { return ns.pass(1e-7) && max_offdiagonal <= tol; }
};

struct SimulationReport {
  int messages = 0;
  NsCheckReport ns;
  double choi_distance = 0.0;  // max-entry distance of the composed Choi to the target
  std::string notes;
  bool faithful(double tol = 1e-6) const { return ns.pass(1e-7) && choi_distance <= tol; }
};

// End-to-end verification: build the correlation, check the no-signalling
// constraints, compose, and compare against the noiseless channel (code) or
// the target channel (simulation).
CodeReport verify_code(const NCGraph& k, const Channel& n, int m, const SolveOptions& opts = {});
SimulationReport verify_simulation(const Channel& n, int m, const SolveOptions& opts = {});

// Deliberately signalling correlations for negative tests.
NsCorrelation forwarding_correlation(int d);     // forwards A_i to B_o (A->B signalling)
NsCorrelation backward_correlation(int d);       // forwards B_i to A_o (B->A signalling)

// Diagonal embedding of a classical bipartite box Q(ab|xy); index order
// q[x][y][a][b].
NsCorrelation classical_box(const std::vector<std::vector<std::vector<std::vector<double>>>>& q);

}  // namespace zerocap
