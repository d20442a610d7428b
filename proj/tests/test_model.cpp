#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "zerocap/model.hpp"

using namespace zerocap;

namespace {

std::mt19937 rng(777);

// Random CPTP channel via a Haar-ish isometry split into nk Kraus operators.
Channel random_channel(int d_in, int d_out, int nk) {
  std::normal_distribution<double> g;
  CMatrix iso(d_out * nk, d_in);
  for (int i = 0; i < iso.rows(); ++i)
    for (int j = 0; j < iso.cols(); ++j) iso(i, j) = Complex(g(rng), g(rng));
  const Eigen::HouseholderQR<CMatrix> qr(iso);
  const CMatrix q = CMatrix(qr.householderQ()).leftCols(d_in);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < nk; ++k) kraus.push_back(q.middleRows(k * d_out, d_out));
  return channel_from_kraus(kraus, d_in, d_out);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("identity qubit Choi is the unnormalized maximally entangled operator") {
  const Channel id2 = identity_channel(2);
  CHECK(id2.trace_preserving);
  CHECK(max_abs(id2.choi.mat() - max_entangled(2)) < 1e-14);
  CHECK(id2.choi.trace() == doctest::Approx(2.0));
}

TEST_CASE("amplitude damping channel: rank-2 Choi with identity A-marginal") {
  const Channel n = amplitude_damping_channel(0.5);
  CHECK(n.trace_preserving);
  const auto sp = spectrum(n.choi);
  int rank = 0;
  for (int i = 0; i < 4; ++i)
    if (sp.eigenvalues(i) > 1e-12) ++rank;
  CHECK(rank == 2);
  CHECK(max_abs(partial_trace(n.choi, {0}).mat() - CMatrix::Identity(2, 2)) < 1e-9);
}

TEST_CASE("classical channel embeds as a diagonal Choi") {
  RMatrix t(2, 3);
  t << 0.5, 0.5, 0.0, 0.0, 0.25, 0.75;
  const Channel n = channel_from_classical(t);
  CHECK(n.trace_preserving);
  const CMatrix j = n.choi.mat();
  for (int a = 0; a < j.rows(); ++a)
    for (int b = 0; b < j.cols(); ++b)
      if (a != b) CHECK(std::abs(j(a, b)) < 1e-14);
  CHECK(j(0 * 3 + 0, 0).real() == doctest::Approx(0.5));
  CHECK(j(1 * 3 + 2, 1 * 3 + 2).real() == doctest::Approx(0.75));
}

TEST_CASE("channels keep tr_B J = 1_A across generators and tensor products") {
  const std::vector<Channel> chans = {identity_channel(3), amplitude_damping_channel(0.3),
                                      two_state_channel(std::sqrt(0.75)),
                                      random_channel(2, 3, 2),
                                      tensor(amplitude_damping_channel(0.5), identity_channel(2))};
  for (const auto& n : chans) {
    CHECK(n.trace_preserving);
    CHECK(max_abs(partial_trace(n.choi, {0}).mat() - CMatrix::Identity(n.d_in, n.d_in)) < 1e-9);
  }
}

TEST_CASE("ragged Kraus lists are rejected") {
  CHECK_THROWS_AS(channel_from_kraus({CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}, 2, 2),
                  spec_error);
  CHECK_THROWS_AS(graph_from_kraus({}, 2, 2), spec_error);
}

TEST_CASE("noiseless classical graph") {
  const NCGraph d2 = noiseless_classical_graph(2);
  REQUIRE(d2.is_cq());
  CHECK(d2.P.mat().trace().real() == doctest::Approx(2.0));
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(3, 3) = 1.0;
  CHECK(max_abs(d2.P.mat() - expect) < 1e-14);
}

TEST_CASE("two-state graph overlap") {
  const double alpha = std::sqrt(0.75);
  const NCGraph k = two_state_graph(alpha);
  REQUIRE(k.is_cq());
  CHECK(f_max((*k.cq)[0], (*k.cq)[1]) == doctest::Approx(0.5).epsilon(1e-12));

  const Graph g = confusability_graph(k);
  CHECK(g.edges.size() == 1);
  CHECK(g.has_edge(0, 1));

  // orthogonal states: empty confusability graph
  const NCGraph ortho = two_state_graph(1.0 / std::sqrt(2.0));
  CHECK(confusability_graph(ortho).edges.empty());
}

TEST_CASE("graph projector equals the Choi support of the defining channel") {
  const std::vector<std::pair<NCGraph, Channel>> pairs = {
      {noiseless_quantum_graph(2), identity_channel(2)},
      {noiseless_classical_graph(3), classical_identity_channel(3)},
      {amplitude_damping_graph(0.5), amplitude_damping_channel(0.5)},
      {two_state_graph(std::sqrt(0.75)), two_state_channel(std::sqrt(0.75))},
      {pentagon_umbrella_graph(), *canonical_channel(pentagon_umbrella_graph())},
  };
  for (const auto& [k, n] : pairs) {
    const HermitianMatrix sp = support_projector(n.choi);
    CHECK(max_abs(k.P.mat() - sp.mat()) < 1e-9);
  }
}

TEST_CASE("amplitude damping graph marginal") {
  const NCGraph k = amplitude_damping_graph(0.5);
  const HermitianMatrix pb = partial_trace(k.P, {1});
  CHECK(pb.mat()(0, 0).real() == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(pb.mat()(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cq construction rejects non-projectors") {
  CMatrix notp = 0.5 * CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(graph_from_cq({notp}), spec_error);
}

TEST_CASE("tensor of noiseless classical graphs is the larger noiseless graph") {
  const NCGraph d2 = noiseless_classical_graph(2);
  const NCGraph d4 = tensor(d2, d2);
  CHECK(max_abs(d4.P.mat() - noiseless_classical_graph(4).P.mat()) < 1e-12);
  REQUIRE(d4.is_cq());
  CHECK(d4.cq->size() == 4);
}

TEST_CASE("tensor is associative up to reordering") {
  const NCGraph a = two_state_graph(std::sqrt(0.8));
  const NCGraph b = amplitude_damping_graph(0.4);
  const NCGraph c = noiseless_classical_graph(2);
  const NCGraph left = tensor(tensor(a, b), c);
  const NCGraph right = tensor(a, tensor(b, c));
  // (A1A2)A3 : (B1B2)B3 and A1(A2A3) : B1(B2B3) only differ by the grouping.
  CHECK(max_abs(
            left.P.with_factors({2, 2, 2, 2, 2, 2}).mat() -
            right.P.with_factors({2, 2, 2, 2, 2, 2}).mat()) < 1e-12);
}

TEST_CASE("tensor rank multiplies") {
  const NCGraph k = amplitude_damping_graph(0.5);
  const NCGraph kk = tensor(k, k);
  CHECK(kk.P.mat().trace().real() ==
        doctest::Approx(k.P.mat().trace().real() * k.P.mat().trace().real()).epsilon(1e-10));
}

TEST_CASE("tensor power guard") {
  const NCGraph q = noiseless_quantum_graph(9);  // 81-dim Choi space
  CHECK_THROWS_AS(power(q, 3), spec_error);      // 9^3 * 9^3 > 4096
}

TEST_CASE("power of the two-state graph is a 4-input cq graph") {
  const NCGraph k2 = power(two_state_graph(std::sqrt(0.75)), 2);
  REQUIRE(k2.is_cq());
  CHECK(k2.d_A == 4);
  CHECK(k2.d_B == 4);
}

TEST_CASE("confusability graph of the square matches the strong product") {
  for (const NCGraph& k : {two_state_graph(std::sqrt(0.75)), pentagon_umbrella_graph()}) {
    const Graph g = confusability_graph(k);
    const Graph g2 = confusability_graph(power(k, 2));
    const Graph prod = strong_product(g, g);
    CHECK(g2.n == prod.n);
    CHECK(g2.edges == prod.edges);
  }
}

TEST_CASE("pentagon umbrella representation") {
  const NCGraph k = pentagon_umbrella_graph();
  const Graph g = confusability_graph(k);
  CHECK(g.edges == cycle_graph(5).edges);
}

TEST_CASE("Kraus space validity") {
  // span{1} is a valid channel space
  const auto ok = validate_kraus_space(noiseless_quantum_graph(2));
  CHECK(ok.valid);
  CHECK(max_abs(CMatrix(ok.witness - ok.witness.adjoint())) < 1e-8);

  // span{1, |0><1|} admits no channel
  std::vector<CMatrix> bad = {CMatrix::Identity(2, 2), matrix_unit(2, 0, 1)};
  const auto report = validate_kraus_space(bad, 2, 2);
  CHECK_FALSE(report.valid);

  // the amplitude damping space is witnessed by its defining channel
  const auto damp = validate_kraus_space(amplitude_damping_graph(0.5));
  CHECK(damp.valid);
}

TEST_CASE("canonical channel spans the graph") {
  for (const NCGraph& k : {two_state_graph(std::sqrt(0.75)), amplitude_damping_graph(0.5)}) {
    const auto n = canonical_channel(k);
    REQUIRE(n.has_value());
    CHECK(n->trace_preserving);
    CHECK(max_abs(support_projector(n->choi).mat() - k.P.mat()) < 1e-7);
  }
}

TEST_CASE("f_max basics") {
  const CMatrix p = matrix_unit(2, 0, 0);
  CHECK(f_max(p, p) == doctest::Approx(1.0));
  CHECK(f_max(p, CMatrix(matrix_unit(2, 1, 1))) == doctest::Approx(0.0));
  CHECK_THROWS_AS(f_max(p, CMatrix(0.3 * p)), spec_error);
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(two_state_graph(0.0), spec_error);
  CHECK_THROWS_AS(two_state_graph(1.5), spec_error);
  CHECK_THROWS_AS(amplitude_damping_channel(-0.1), spec_error);
  CHECK_THROWS_AS(confusability_graph(noiseless_quantum_graph(2)), spec_error);
}

TEST_CASE("graph helpers") {
  Graph g = cycle_graph(5);
  CHECK(g.edges.size() == 5);
  CHECK_THROWS_AS(g.add_edge(1, 1), spec_error);
  CHECK_THROWS_AS(g.add_edge(0, 7), spec_error);
}
