#include <cmath>

#include "doctest.h"
#include "stieltjes/generators.hpp"
#include "stieltjes/integral_rep.hpp"
#include "test_support.hpp"

using namespace stieltjes;
using namespace testing_support;

TEST_CASE("spectral measure clusters eigenvalues") {
  const SpectralMeasure s = spectral_measure(LinearRelation::from_operator(diag({1, 1, 3})));
  REQUIRE(s.nodes.size() == 2);
  CHECK(s.nodes[0] == doctest::Approx(1.0));
  CHECK(s.nodes[1] == doctest::Approx(3.0));
  CHECK(dist(s.projectors[0], diag({1, 1, 0})) < 1e-12);
  CHECK(dist(s.projectors[1], diag({0, 0, 1})) < 1e-12);
  CHECK(dist(s.P_o, eye(3)) < 1e-12);
  CHECK(s.P_perp.norm() < 1e-12);

  Generator g(61);
  for (int t = 0; t < 20; ++t) {
    const SpectralMeasure m = spectral_measure(g.nonnegative_relation(4, t % 2));
    Matrix sum = Matrix::Zero(4, 4);
    for (const Matrix& p : m.projectors) sum += p;
    CHECK(dist(sum, m.P_o) < 1e-10);
    CHECK(dist(m.P_o + m.P_perp, eye(4)) < 1e-10);
    for (std::size_t i = 1; i < m.nodes.size(); ++i) CHECK(m.nodes[i] > m.nodes[i - 1]);
  }
}

TEST_CASE("scalar oracles") {
  const StieltjesConstruction c = StieltjesConstruction::make(LinearRelation::from_operator(eye(1)), eye(1), eye(1));
  const IntegralRepresentation r = stieltjes_rep(c);
  CHECK(std::abs(r.Gamma(0, 0)) < 1e-14);
  REQUIRE(r.atoms.size() == 1);
  CHECK(r.atoms[0].t == doctest::Approx(1.0));
  CHECK(r.atoms[0].weight(0, 0).real() == doctest::Approx(2.0));
  CHECK(std::abs(evaluate_rep(r, -1.0)(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(evaluate_rep(r, I1)(0, 0) - 2.0 / (1.0 - I1)) < 1e-14);
  try {
    evaluate_rep(r, 1.0);
    FAIL("expected PoleHit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleHit);
  }

  // V = 0: Q0 = I, no atoms carry weight
  const StieltjesConstruction z = StieltjesConstruction::make(LinearRelation::from_operator(diag({1, 2})), Matrix::Zero(2, 1), eye(1));
  const IntegralRepresentation rz = stieltjes_rep(z);
  CHECK(dist(rz.Gamma, eye(1)) < 1e-14);
  for (const RepresentationAtom& a : rz.atoms) CHECK(a.weight.norm() < 1e-14);

  // A_hat = 0, inverse kind: R0 of {0} x K is -I
  const StieltjesConstruction a0 = StieltjesConstruction::make(LinearRelation::zero_operator(2), mat(2, 1, {0.6, 0.0}), eye(1));
  const IntegralRepresentation ri = inverse_stieltjes_rep(a0);
  CHECK(dist(ri.Gamma, -eye(1)) < 1e-14);
  REQUIRE(ri.Pi.has_value());
  CHECK(ri.Pi->norm() < 1e-14);
  CHECK(ri.atoms.empty());
  CHECK(reconstruction_error(ri, a0, default_rep_grid()) < 1e-12);
  CHECK_THROWS_AS(evaluate_rep(ri, 0.0), Error);
}

TEST_CASE("seeded reconstructions") {
  Generator g(62);
  const std::vector<Complex> grid = default_rep_grid();
  CHECK(grid.size() == 20);
  for (int t = 0; t < 50; ++t) {
    const Index k = 1 + t % 5;
    const StieltjesConstruction c = StieltjesConstruction::make(
        g.nonnegative_relation(k, t % 3 == 0 ? 1 : 0), g.contraction(k, 1 + t % 3),
        g.complex_matrix(1 + t % 3, 1 + t % 3) * 0.5);
    const IntegralRepresentation q = stieltjes_rep(c);
    const IntegralRepresentation r = inverse_stieltjes_rep(c);
    CHECK(reconstruction_error(q, c, grid) < 1e-9);
    CHECK(reconstruction_error(r, c, grid) < 1e-9);
    CHECK(q.moment_residual <= 1e-10);
    CHECK(r.moment_residual <= 1e-10);
    CHECK(min_eig_hermitian(q.Gamma) >= -1e-10);
    CHECK(max_eig_hermitian(r.Gamma) <= 1e-10);
    CHECK(min_eig_hermitian(*r.Pi) >= -1e-10);
    for (const RepresentationAtom& a : q.atoms) CHECK(min_eig_hermitian(a.weight) >= -1e-10);
    for (const RepresentationAtom& a : r.atoms) CHECK(a.t > 0.0);
  }
}

TEST_CASE("unbounded Z is not represented") {
  Generator g(63);
  const StieltjesConstruction c = g.construction(2, 2, true);
  const StieltjesConstruction partial =
      StieltjesConstruction::make(c.A_hat, c.V, c.Z, Subspace(2, mat(2, 1, {1, 0})));
  CHECK_THROWS_AS(stieltjes_rep(partial), Error);
}
