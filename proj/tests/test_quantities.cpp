#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zerocap/quantities.hpp"

using namespace zerocap;

namespace {

std::mt19937 rng(4242);

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

NCGraph random_cq(int n, int d_B) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> rk(1, d_B - 1);
  std::vector<CMatrix> proj;
  for (int i = 0; i < n; ++i) {
    CMatrix m(d_B, d_B);
    for (int r = 0; r < d_B; ++r)
      for (int c = 0; c < d_B; ++c) m(r, c) = Complex(g(rng), g(rng));
    const Eigen::HouseholderQR<CMatrix> qr(m);
    const CMatrix q = CMatrix(qr.householderQ()).leftCols(rk(rng));
    proj.push_back(q * q.adjoint());
  }
  return graph_from_cq(proj);
}

RMatrix random_classical(int nx, int ny) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RMatrix t = RMatrix::Zero(nx, ny);
  for (int x = 0; x < nx; ++x) {
    double norm = 0.0;
    for (int y = 0; y < ny; ++y) {
      const double v = u(rng) < 0.5 ? 0.0 : u(rng);
      t(x, y) = v;
      norm += v;
    }
    if (norm == 0.0) t(x, ny - 1) = norm = 1.0;
    t.row(x) /= norm;
  }
  return t;
}

constexpr double kA075 = 4.0 / 3.0;

}  // namespace

TEST_CASE("upsilon of noiseless graphs") {
  CHECK(upsilon(noiseless_classical_graph(2)).value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(upsilon(noiseless_classical_graph(3)).value == doctest::Approx(3.0).epsilon(1e-6));
  const QuantityResult q = upsilon(noiseless_quantum_graph(2));
  CHECK(q.value == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(q.integer_part == 4);
  CHECK(q.crosscheck_gap < 1e-6 * 5);
}

TEST_CASE("upsilon of the two-state family is 1") {
  const QuantityResult q = upsilon(two_state_graph(std::sqrt(0.75)));
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(q.integer_part == 1);
  // reduced cq program agrees with the projector formulation
  const QuantityResult full = upsilon_full(two_state_graph(std::sqrt(0.75)));
  CHECK(std::abs(full.value - q.value) < 1e-6);
}

TEST_CASE("two-copy two-state values") {
  // boundary overlap 1/sqrt(2): the two-copy value is exactly 4/3
  const double a2_boundary = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
  const QuantityResult qb = upsilon(power(two_state_graph(std::sqrt(a2_boundary)), 2));
  CHECK(qb.value == doctest::Approx(4.0 / 3.0).epsilon(1e-5));

  // overlap 1/2: certified sandwich [1/(a^4+b^4), A^2]
  const QuantityResult q = upsilon(power(two_state_graph(std::sqrt(0.75)), 2));
  CHECK(q.value >= 1.6 - 1e-5);
  CHECK(q.value <= kA075 * kA075 + 1e-5);

  // overlap 0.8 > 1/sqrt(2): no two-copy gain
  const QuantityResult q9 = upsilon(power(two_state_graph(std::sqrt(0.9)), 2));
  CHECK(q9.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simulation cost of fixed channels") {
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.3;
  rho(1, 1) = 0.7;
  CHECK(sigma_channel(constant_channel(rho, 2)).value == doctest::Approx(1.0).epsilon(1e-6));

  for (int d : {2, 3}) {
    const QuantityResult q = sigma_channel(identity_channel(d));
    CHECK(q.value == doctest::Approx(d * d).epsilon(1e-6));
    CHECK(q.integer_part == d * d);
  }

  // two pure states: 1 + trace distance = 1 + 2 alpha beta
  const double alpha = std::sqrt(0.75), beta = 0.5;
  const QuantityResult q = sigma_channel(two_state_channel(alpha));
  CHECK(q.value == doctest::Approx(1.0 + 2.0 * alpha * beta).epsilon(1e-6));
}

TEST_CASE("simulation cost of graphs") {
  CHECK(sigma_graph(noiseless_classical_graph(2)).value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sigma_graph(noiseless_classical_graph(3)).value == doctest::Approx(3.0).epsilon(1e-6));

  const double alpha = std::sqrt(0.75);
  const QuantityResult q = sigma_graph(two_state_graph(alpha));
  CHECK(q.value == doctest::Approx(1.0 + std::sqrt(3.0) / 2.0).epsilon(1e-6));
  CHECK(q.integer_part == 2);
  // cq reduction vs projector formulation
  CHECK(std::abs(sigma_graph_full(two_state_graph(alpha)).value - q.value) < 1e-6);

  // the damping space holds a unique channel, so both costs coincide
  const QuantityResult qk = sigma_graph(amplitude_damping_graph(0.5));
  const QuantityResult qn = sigma_channel(amplitude_damping_channel(0.5));
  CHECK(std::abs(qk.value - qn.value) < 1e-6);
  CHECK(qk.value >= 2.25 - 1e-6);
}

TEST_CASE("packing numbers of the named families") {
  CHECK(aram(two_state_graph(std::sqrt(0.75))).value == doctest::Approx(kA075).epsilon(1e-6));
  CHECK(aram(amplitude_damping_graph(0.5)).value == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(aram_tilde(amplitude_damping_graph(0.5)).value == doctest::Approx(2.25).epsilon(1e-6));
  // A = A-tilde for cq graphs
  const NCGraph k = random_cq(3, 3);
  CHECK(std::abs(aram(k).value - aram_tilde(k).value) < 1e-6);
}

TEST_CASE("packing dual lemma: aram * aram_hat = 1") {
  for (const NCGraph& k : {amplitude_damping_graph(0.3), two_state_graph(std::sqrt(0.8)),
                           graph_from_channel(random_channel(2, 2, 2))}) {
    const double a = aram(k).value;
    const double ahat = aram_hat(k).value;
    CHECK(std::abs(a * ahat - 1.0) < 1e-6 * (1.0 + a));
  }
}

TEST_CASE("fractional packing numbers") {
  RMatrix ident = RMatrix::Identity(3, 3);
  CHECK(fractional_packing(ident).value == doctest::Approx(3.0).epsilon(1e-7));

  // pentagon typewriter: x -> {x, x+1 mod 5}
  RMatrix tw = RMatrix::Zero(5, 5);
  for (int x = 0; x < 5; ++x) {
    tw(x, x) = 0.5;
    tw(x, (x + 1) % 5) = 0.5;
  }
  const QuantityResult q = fractional_packing(tw);
  CHECK(q.value == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(q.crosscheck_gap < 1e-7);

  // every input reaches the single output
  RMatrix one = RMatrix::Ones(4, 1);
  CHECK(fractional_packing(one).value == doctest::Approx(1.0).epsilon(1e-7));

  RMatrix isolated = RMatrix::Zero(2, 2);
  isolated(0, 0) = 1.0;
  CHECK_THROWS_AS(fractional_packing(isolated), spec_error);
}

TEST_CASE("Lovasz numbers") {
  CHECK(lovasz_theta(complete_graph(4)).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(lovasz_theta(empty_graph(6)).value == doctest::Approx(6.0).epsilon(1e-6));
  const QuantityResult c5 = lovasz_theta(cycle_graph(5));
  CHECK(c5.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-5));
  CHECK(c5.crosscheck_gap < 1e-5);
}

TEST_CASE("umbrella representation attains the pentagon Lovasz number") {
  const QuantityResult q = aram(pentagon_umbrella_graph());
  CHECK(q.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-4));
}

TEST_CASE("two-state report closed forms and ansatz") {
  const double alpha = std::sqrt(0.75);
  const TwoStateReport r2 = two_state_report(alpha, 2);
  CHECK(r2.upsilon == doctest::Approx(1.0));
  CHECK(r2.aram == doctest::Approx(kA075).epsilon(1e-12));
  CHECK(r2.sigma == doctest::Approx(1.0 + std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(r2.cmin_e == doctest::Approx(binary_entropy(0.25)).epsilon(1e-12));
  CHECK(r2.condition_holds);
  REQUIRE(r2.ansatz_bound.has_value());
  CHECK(*r2.ansatz_bound == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r2.witness_residual <= 1e-8);

  const TwoStateReport r3 = two_state_report(alpha, 3);
  CHECK(r3.condition_holds);
  REQUIRE(r3.ansatz_bound.has_value());
  const double a6 = std::pow(0.75, 3), b6 = std::pow(0.25, 3);
  CHECK(*r3.ansatz_bound == doctest::Approx(1.0 / (a6 + b6)).epsilon(1e-12));

  // overlap 0.8 > 1/sqrt(2): the two-copy ansatz is infeasible
  const TwoStateReport r9 = two_state_report(std::sqrt(0.9), 2);
  CHECK_FALSE(r9.condition_holds);
  CHECK_FALSE(r9.ansatz_bound.has_value());
}

TEST_CASE("entanglement-assisted capacity closed forms") {
  CHECK(cmin_e_amplitude_damping(0.5) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cmin_e_two_state(1.0) == doctest::Approx(0.0));
  CHECK(cmin_e_two_state(std::sqrt(0.75)) == doctest::Approx(0.8112781245).epsilon(1e-9));
}

TEST_CASE("superdense bound") {
  CHECK(superdense_bound(noiseless_classical_graph(3)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(superdense_bound(amplitude_damping_graph(0.5)) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(superdense_bound(noiseless_quantum_graph(2)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("feasibility predicates") {
  for (double a2 : {0.6, 0.75, 0.95}) {
    const FeasibilityReport r = feasibility(two_state_graph(std::sqrt(a2)));
    CHECK(r.positive_capacity);
    REQUIRE(r.cq_positive.has_value());
    CHECK(*r.cq_positive);
  }

  // identical supports: no zero-error communication at any block length
  const CMatrix p = matrix_unit(2, 0, 0);
  const FeasibilityReport bad = feasibility(graph_from_cq({p, p}));
  CHECK_FALSE(bad.positive_capacity);
  REQUIRE(bad.common_vector.has_value());
  CHECK(std::abs((*bad.common_vector)(0)) == doctest::Approx(1.0).epsilon(1e-9));

  const FeasibilityReport damp = feasibility(amplitude_damping_graph(0.5));
  CHECK(damp.positive_capacity);
  CHECK(superdense_bound(amplitude_damping_graph(0.5)) > 1.0);
}

TEST_CASE("cq and general feasibility paths agree on random graphs") {
  for (int trial = 0; trial < 8; ++trial) {
    const NCGraph k = random_cq(3, 3);
    const FeasibilityReport r = feasibility(k);
    REQUIRE(r.cq_positive.has_value());
    CHECK(*r.cq_positive == (r.eigenvalue_gap > 1e-9));
  }
}

TEST_CASE("cq fast paths agree with the projector formulation on random graphs") {
  for (int trial = 0; trial < 3; ++trial) {
    const NCGraph k = random_cq(2, 3);
    CHECK(std::abs(upsilon(k).value - upsilon_full(k).value) < 1e-6);
    CHECK(std::abs(sigma_graph(k).value - sigma_graph_full(k).value) < 1e-6);
  }
}

TEST_CASE("strong duality on random graphs") {
  for (int trial = 0; trial < 4; ++trial) {
    const Channel n = trial % 2 ? random_channel(2, 2, 2) : random_channel(3, 2, 2);
    const NCGraph k = graph_from_channel(n);
    for (const QuantityResult& q : {upsilon(k), sigma_graph(k), aram(k), aram_tilde(k)}) {
      REQUIRE(q.ok());
      CHECK(q.crosscheck_gap <= 1e-6 * (1.0 + std::abs(q.value)));
    }
  }
}

TEST_CASE("ordering: 1 <= upsilon <= aram on cq graphs, sigma >= aram_tilde") {
  for (int trial = 0; trial < 4; ++trial) {
    const NCGraph k = random_cq(2 + trial % 2, 3);
    const double u = upsilon(k).value;
    CHECK(u >= 1.0 - 1e-7);
    CHECK(u <= aram(k).value + 1e-6);
    CHECK(sigma_graph(k).value >= aram_tilde(k).value - 1e-6);
  }
}

TEST_CASE("super- and sub-multiplicativity") {
  const NCGraph k = graph_from_channel(random_channel(2, 2, 2));
  const NCGraph kk = tensor(k, k);
  CHECK(upsilon(kk).value >= upsilon(k).value * upsilon(k).value - 1e-5);
  CHECK(sigma_graph(kk).value <= sigma_graph(k).value * sigma_graph(k).value + 1e-5);
}

TEST_CASE("cq sigma multiplicativity") {
  const NCGraph k1 = random_cq(2, 2);
  const NCGraph k2 = random_cq(2, 3);
  CHECK(std::abs(sigma_graph(tensor(k1, k2)).value - sigma_graph(k1).value * sigma_graph(k2).value) <
        1e-5);
}

TEST_CASE("min-entropy additivity") {
  const Channel n1 = random_channel(2, 2, 2);
  const Channel n2 = random_channel(2, 2, 3);
  CHECK(std::abs(sigma_channel(tensor(n1, n2)).value -
                 sigma_channel(n1).value * sigma_channel(n2).value) < 1e-5);
}

TEST_CASE("classical collapse") {
  for (int trial = 0; trial < 5; ++trial) {
    const RMatrix t = random_classical(3, 3);
    const NCGraph k = graph_from_classical(t);
    const double astar = fractional_packing(t).value;
    CHECK(std::abs(upsilon(k).value - astar) < 1e-6);
    CHECK(std::abs(sigma_graph(k).value - astar) < 1e-6);
    CHECK(std::abs(aram(k).value - astar) < 1e-6);
  }
}

TEST_CASE("two-state chain log A <= C_minE <= log Sigma") {
  for (double b2 : {0.1, 0.25, 0.4}) {
    const double a = std::sqrt(1.0 - b2);
    const double la = std::log2(1.0 / (a * a));
    const double ce = cmin_e_two_state(a);
    const double ls = std::log2(1.0 + 2.0 * a * std::sqrt(b2));
    CHECK(la < ce);
    CHECK(ce < ls);
  }
}

TEST_CASE("upsilon with a pinned trace is feasible up to the optimum") {
  const NCGraph d3 = noiseless_classical_graph(3);
  const QuantityResult q = upsilon_with_trace(d3, 3.0);
  CHECK(q.ok());
  CHECK_THROWS_AS(upsilon_with_trace(d3, 4.0), infeasible_error);
}
