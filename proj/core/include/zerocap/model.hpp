#pragma once

// Channels, Kraus operator spaces, non-commutative bipartite graphs,
// cq-graphs and classical graphs, plus generators for the named example
// families (two-state, amplitude damping, noiseless channels, pentagon).

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "zerocap/matcore.hpp"

namespace zerocap {

// --------------------------------- Channel ----------------------------------

// A completely positive map held as Kraus operators with the derived Choi
// matrix (id (x) N)(Phi) on factors [d_in, d_out].  Maps whose Kraus sum
// deviates from the identity by more than 1e-9 are kept but flagged non-TP.
struct Channel {
  int d_in = 0;
  int d_out = 0;
  std::vector<CMatrix> kraus;
  HermitianMatrix choi;
  bool trace_preserving = true;

  // Conjugate Choi matrix: the convention the zero-error orthogonality test
  // contracts against.
  CMatrix conjugate_choi() const { return choi.mat().conjugate(); }

  CMatrix apply(const CMatrix& rho) const;
  CMatrix apply_adjoint(const CMatrix& sigma) const;
};

Channel channel_from_kraus(std::vector<CMatrix> kraus, int d_in, int d_out);
Channel channel_from_choi(const CMatrix& choi, int d_in, int d_out, double tol = 1e-10);
Channel channel_from_classical(const RMatrix& transition);  // transition(x, y) = p(y|x)
Channel identity_channel(int d);
Channel constant_channel(const CMatrix& sigma, int d_in);
Channel classical_identity_channel(int l);  // dephasing embed of the l-symbol identity
Channel tensor(const Channel& a, const Channel& b);
Channel power(const Channel& n, int copies);

// ---------------------------------- Graph -----------------------------------

// Simple undirected graph; vertices 0..n-1, no self-loops.
struct Graph {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
};

Graph complete_graph(int n);
Graph empty_graph(int n);
Graph cycle_graph(int n);
Graph strong_product(const Graph& g, const Graph& h);

// --------------------------------- NCGraph ----------------------------------

// Non-commutative bipartite graph: the Kraus operator space of a channel,
// represented by the projector P onto its Choi support (factors [d_A, d_B]),
// an orthonormal Kraus basis spanning the space, and, when the space comes
// from a cq-channel, the output support projectors {P_i}.
struct NCGraph {
  int d_A = 0;
  int d_B = 0;
  HermitianMatrix P;
  std::vector<CMatrix> kraus_basis;     // orthonormal, d_B x d_A
  std::optional<std::vector<CMatrix>> cq;  // P_i on B, d_A entries

  bool is_cq() const { return cq.has_value(); }
  int rank() const { return static_cast<int>(kraus_basis.size()); }
};

NCGraph graph_from_kraus(const std::vector<CMatrix>& kraus, int d_in, int d_out);
NCGraph graph_from_channel(const Channel& n);
NCGraph graph_from_cq(const std::vector<CMatrix>& projectors);
NCGraph graph_from_classical(const RMatrix& transition);

// Named generators.
NCGraph noiseless_classical_graph(int l);         // Delta_l
NCGraph noiseless_quantum_graph(int l);           // K = C*identity
NCGraph two_state_graph(double alpha);            // cq pair with overlap 2a^2-1
NCGraph amplitude_damping_graph(double r);
NCGraph pentagon_umbrella_graph();                // optimal orthogonal representation of C5

Channel two_state_channel(double alpha);
Channel amplitude_damping_channel(double r);

NCGraph tensor(const NCGraph& a, const NCGraph& b);
NCGraph power(const NCGraph& k, int n);

// Confusability graph of a cq-graph: edge {i,j} iff the output supports are
// non-orthogonal (|| P_i P_j ||_inf > 1e-9).
Graph confusability_graph(const NCGraph& k);

// For a cq-graph, a canonical channel with this Kraus operator space
// (i -> P_i / tr P_i); for a general graph, the channel reconstructed from
// the Kraus-space validity witness.  Empty when the space admits no channel.
std::optional<Channel> canonical_channel(const NCGraph& k);

// ---------------------------- Kraus-space validity --------------------------

struct KrausSpaceReport {
  bool valid = false;
  CMatrix witness;      // positive definite r with sum_kl r_kl E_k^dag E_l = 1
  CMatrix certificate;  // on infeasibility: Hermitian separating functional
};

// Decides whether the span of the (orthonormalized) Kraus basis is the Kraus
// operator space of some channel, by the SDP feasibility problem
//   find R >= eps*1  with  sum_kl R_kl E_k^dag E_l = 1,   eps = 1e-6.
KrausSpaceReport validate_kraus_space(const NCGraph& k);
KrausSpaceReport validate_kraus_space(const std::vector<CMatrix>& kraus, int d_in, int d_out);

// Largest singular value of a product of two projectors: the maximal overlap
// of unit vectors in their supports.
double f_max(const CMatrix& p0, const CMatrix& p1);

}  // namespace zerocap
