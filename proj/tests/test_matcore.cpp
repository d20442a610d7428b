#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "zerocap/matcore.hpp"

using namespace zerocap;

namespace {

std::mt19937 rng(12345);

CMatrix random_hermitian(int d) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint().eval());
}

CMatrix random_psd(int d) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m * m.adjoint();
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Amplitude damping Kraus operators.
std::vector<CMatrix> damping_kraus(double r) {
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - r);
  e1(0, 1) = std::sqrt(r);
  return {e0, e1};
}

HermitianMatrix kraus_support(const std::vector<CMatrix>& kraus, int d_in, int d_out) {
  CMatrix j = CMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const auto& e : kraus) {
    CVector v(d_in * d_out);
    for (int i = 0; i < d_in; ++i)
      for (int b = 0; b < d_out; ++b) v(i * d_out + b) = e(b, i);
    j += v * v.adjoint();
  }
  return support_projector(HermitianMatrix::from(j, {d_in, d_out}));
}

}  // namespace

TEST_CASE("construction hermitizes and validates") {
  CMatrix m = random_hermitian(3);
  CMatrix skew = m;
  skew(0, 1) += Complex(0, 1e-12);  // below the rejection threshold
  const auto h = HermitianMatrix::from(skew);
  CHECK(max_abs(h.mat() - h.mat().adjoint()) == 0.0);

  skew(0, 1) += Complex(0.5, 0.0);  // genuinely non-Hermitian
  CHECK_THROWS_AS(HermitianMatrix::from(skew), spec_error);

  CHECK_THROWS_AS(HermitianMatrix::from(m, {2, 2}), spec_error);  // 4 != 3
}

TEST_CASE("kron_perm identity and swap") {
  const CMatrix x = random_hermitian(3);
  const auto hx = HermitianMatrix::from(x);
  CHECK(max_abs(kron_perm({hx}, {0}).mat() - x) < 1e-14);

  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const auto id2 = HermitianMatrix::identity({2});
  const auto hz = HermitianMatrix::from(z);
  const auto swapped = kron_perm({id2, hz}, {1, 0});
  CHECK(max_abs(swapped.mat() - kron(z, CMatrix::Identity(2, 2))) < 1e-14);
}

TEST_CASE("kron_perm of Choi projectors matches the stacked-Kraus construction") {
  // P(K1 (x) K2) built by reordering P1 (x) P2 must agree with the projector
  // built directly from the product Kraus set.
  const auto k1 = damping_kraus(0.5);
  std::vector<CMatrix> k2 = {CMatrix::Identity(2, 2) / std::sqrt(2.0)};
  const auto p1 = kraus_support(k1, 2, 2);
  const auto p2 = kraus_support(k2, 2, 2);

  const auto combined = kron_perm({p1, p2}, {0, 2, 1, 3});

  std::vector<CMatrix> prod;
  for (const auto& a : k1)
    for (const auto& b : k2) prod.push_back(kron(a, b));
  const auto direct = kraus_support(prod, 4, 4);
  CHECK(max_abs(combined.mat() - direct.mat()) < 1e-10);
}

TEST_CASE("kron_perm rejects bad permutations") {
  const auto a = HermitianMatrix::identity({2});
  const auto b = HermitianMatrix::identity({3});
  CHECK_THROWS_AS(kron_perm({a, b}, {0, 0}), spec_error);
  CHECK_THROWS_AS(kron_perm({a, b}, {0, 2}), spec_error);
  CHECK_THROWS_AS(kron_perm({a, b}, {0}), spec_error);
}

TEST_CASE("partial trace basics") {
  // tr_B Phi = 1_A for the unnormalized maximally entangled operator.
  const auto phi = HermitianMatrix::from(max_entangled(2), {2, 2});
  CHECK(max_abs(partial_trace(phi, {0}).mat() - CMatrix::Identity(2, 2)) < 1e-14);

  const CMatrix x = random_hermitian(2), y = random_hermitian(3);
  const auto xy = HermitianMatrix::from(kron(x, y), {2, 3});
  CHECK(max_abs(partial_trace(xy, {0}).mat() - x * y.trace()) < 1e-12);

  // trace preservation
  const auto t = HermitianMatrix::from(random_hermitian(12), {2, 3, 2});
  CHECK(partial_trace(t, {1}).trace() == doctest::Approx(t.trace()).epsilon(1e-12));

  CHECK_THROWS_AS(partial_trace(t, {3}), spec_error);
  CHECK_THROWS_AS(partial_trace(t, {}), spec_error);
}

TEST_CASE("partial trace of the damping Choi support, kept on B") {
  // tr_A P = diag((3-r)/(2-r), (1-r)/(2-r)); at r = 0.5 this is diag(5/3, 1/3).
  const auto p = kraus_support(damping_kraus(0.5), 2, 2);
  const auto pb = partial_trace(p, {1});
  CHECK(pb.mat()(0, 0).real() == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(pb.mat()(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(pb.mat()(0, 1)) < 1e-12);
}

TEST_CASE("partial trace composes") {
  const auto t = HermitianMatrix::from(random_hermitian(24), {2, 3, 2, 2});
  const auto once = partial_trace(t, {0, 1});   // trace out factors 2, 3 jointly
  const auto step = partial_trace(partial_trace(t, {0, 1, 2}), {0, 1});
  CHECK(max_abs(once.mat() - step.mat()) < 1e-12);
}

TEST_CASE("support projectors") {
  CHECK(max_abs(support_projector(HermitianMatrix::identity({4})).mat() - CMatrix::Identity(4, 4)) <
        1e-12);

  std::normal_distribution<double> g;
  CVector v(3);
  for (int i = 0; i < 3; ++i) v(i) = Complex(g(rng), g(rng));
  const CMatrix vv = v * v.adjoint();
  const auto p = support_projector(HermitianMatrix::from(vv));
  CHECK(max_abs(p.mat() - vv / v.squaredNorm()) < 1e-12);

  // Choi support of the damping channel: rank 2, spanned by
  // |00> + sqrt(1-r)|11> and |10>.
  const auto ps = kraus_support(damping_kraus(0.5), 2, 2);
  CHECK(ps.mat().trace().real() == doctest::Approx(2.0).epsilon(1e-12));
  CVector u0 = CVector::Zero(4), u1 = CVector::Zero(4);
  u0(0) = 1.0;
  u0(3) = std::sqrt(0.5);
  u0.normalize();
  u1(2) = 1.0;
  const CMatrix expect = u0 * u0.adjoint() + u1 * u1.adjoint();
  CHECK(max_abs(ps.mat() - expect) < 1e-12);

  CHECK_THROWS_AS(support_projector(HermitianMatrix::from(-CMatrix::Identity(2, 2))), spec_error);
}

TEST_CASE("support projector idempotence on random PSD inputs") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = support_projector(HermitianMatrix::from(random_psd(5)));
    CHECK((p.mat() * p.mat() - p.mat()).norm() <= 1e-10);
  }
}

TEST_CASE("eigendecomposition reconstructs") {
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix x = random_hermitian(6);
    const auto sp = spectrum(HermitianMatrix::from(x));
    const CMatrix rebuilt =
        sp.eigenvectors * sp.eigenvalues.cast<Complex>().asDiagonal() * sp.eigenvectors.adjoint();
    CHECK((rebuilt - x).norm() / x.norm() < 1e-10);
  }
}

TEST_CASE("min and max eigenvalues") {
  CHECK(min_eigenvalue(HermitianMatrix::identity({5})) == doctest::Approx(1.0));
  CMatrix d(2, 2);
  d << 3, 0, 0, -2;
  CHECK(min_eigenvalue(HermitianMatrix::from(d)) == doctest::Approx(-2.0));

  const auto phi = HermitianMatrix::from(max_entangled(2), {2, 2});
  CHECK(min_eigenvalue(phi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(max_eigenvalue(phi) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kron_perm composed with its inverse is the identity") {
  const auto a = HermitianMatrix::from(random_hermitian(2));
  const auto b = HermitianMatrix::from(random_hermitian(3));
  const auto c = HermitianMatrix::from(random_hermitian(2));
  const Dims order = {2, 0, 1};
  const auto fwd = kron_perm({a, b, c}, order);
  // inverse permutation
  Dims inv(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) inv[order[p]] = static_cast<int>(p);
  const auto back = permute_factors(fwd.mat(), fwd.factors(), inv);
  CHECK(max_abs(back - kron(kron(a.mat(), b.mat()), c.mat())) == 0.0);
}

TEST_CASE("orthonormalize drops dependent operators") {
  const CMatrix e = random_hermitian(3);
  const auto basis = orthonormalize({e, 2.0 * e, random_hermitian(3)});
  CHECK(basis.size() == 2);
  for (const auto& u : basis) CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs((basis[0].adjoint() * basis[1]).trace()) < 1e-10);
}
