#include <cmath>

#include "doctest.h"
#include "stieltjes/contractions.hpp"
#include "stieltjes/generators.hpp"
#include "stieltjes/rs_functions.hpp"
#include "test_support.hpp"

using namespace stieltjes;
using namespace testing_support;

namespace {

RSFunction scaled_z(Complex c, Index n) {
  return RSFunction(n, [c, n](Complex z) { return Matrix(c * z * eye(n)); }, "scaled_z");
}

}  // namespace

TEST_CASE("transfer function basics") {
  Generator g(31);
  const PassiveSelfadjointSystem sys = g.system(2, 3);
  CHECK(dist(transfer(sys, 0.0), sys.D()) < 1e-15);
  const Matrix d = g.hermitian_contraction(2);
  const PassiveSelfadjointSystem decoupled = PassiveSelfadjointSystem::from_blocks(d, Matrix::Zero(2, 3), g.hermitian_contraction(3));
  CHECK(dist(transfer(decoupled, Complex(0.3, 0.7)), d) < 1e-15);
  const Matrix o = transfer(sys, 0.3);
  CHECK(min_eig_hermitian(eye(2) - o) >= -1e-10);
  CHECK(min_eig_hermitian(eye(2) + o) >= -1e-10);
  CHECK_THROWS_AS(transfer(sys, -1.0), Error);
  CHECK_THROWS_AS(transfer(sys, 2.0), Error);
  CHECK_THROWS_AS(PassiveSelfadjointSystem(1, mat(2, 2, {0, 1, 0, 0})), Error);
  CHECK_THROWS_AS(PassiveSelfadjointSystem(1, 2.0 * eye(2)), Error);
  // symmetry
  for (int t = 0; t < 20; ++t) {
    const PassiveSelfadjointSystem s = g.system(1 + t % 4, 1 + t % 6);
    for (Complex z : {Complex(0.2, 0.5), Complex(-0.6, 0.1), Complex(0.0, -0.9)})
      CHECK(dist(transfer(s, std::conj(z)), transfer(s, z).adjoint()) < 1e-10);
  }
}

TEST_CASE("Schur-Frobenius formula") {
  Generator g(32);
  const PassiveSelfadjointSystem sys = g.system(3, 4);
  CHECK(schur_frobenius_check(sys, 0.0) < 1e-15);
  CHECK(schur_frobenius_check(sys, Complex(0.5, 0.2)) < 1e-10);
  const PassiveSelfadjointSystem decoupled = PassiveSelfadjointSystem::from_blocks(0.5 * eye(2), Matrix::Zero(2, 2), 0.5 * eye(2));
  CHECK(schur_frobenius_check(decoupled, Complex(0.1, 0.3)) < 1e-14);
}

TEST_CASE("RS membership") {
  const std::vector<Complex> grid = default_rs_grid();
  CHECK(grid.size() == 30);
  Generator g(33);
  CHECK(rs_membership(RSFunction::constant(g.hermitian_contraction(3)), grid).passed);
  CHECK(rs_membership(scaled_z(1.0, 2), grid).passed);

  const MembershipReport bad = rs_membership(scaled_z(2.0, 1), grid);
  CHECK_FALSE(bad.passed);
  CHECK(bad.worst_inequality < 0);
  // scalar oracle at z = 0.9i: 1 - |2z|^2 - (1 - |z|^2) * 2 < 0
  bool found = false;
  for (const MembershipEntry& e : rs_membership(scaled_z(2.0, 1), {Complex(0, 0.9)}).entries)
    if (e.check == "inequality") {
      found = true;
      CHECK(e.min_eig == doctest::Approx(1 - 4 * 0.81 - (1 - 0.81) * 2));
    }
  CHECK(found);

  for (int t = 0; t < 100; ++t) {
    const PassiveSelfadjointSystem s = g.system(1 + t % 4, 1 + t % 6);
    const MembershipReport r = rs_membership(RSFunction::from_system(s), grid);
    CHECK(r.worst() >= -1e-8);
  }
}

TEST_CASE("class angle at disk points") {
  Generator g(34);
  const RSFunction om = RSFunction::from_system(g.system(2, 3));
  CHECK(class_angle_at(om, 0.4) == 0.0);
  CHECK(class_angle_at(om, Complex(0, 0.5)) == doctest::Approx(std::atan(4.0 / 3.0)));
  for (int j = 0; j < 20; ++j) CHECK_NOTHROW(class_angle_at(om, std::polar(0.05 + 0.045 * j, 0.3 * j)));
  try {
    class_angle_at(scaled_z(2.0, 1), Complex(0, 0.9));
    FAIL("expected MembershipViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MembershipViolated);
    CHECK(e.residual() > 0);
  }
}

TEST_CASE("structure decomposition") {
  const StructureDecomposition id = structure_decomposition(RSFunction::constant(eye(2)));
  CHECK(dist(id.proj_plus, eye(2)) < 1e-14);
  CHECK(id.proj_minus.norm() < 1e-14);
  const StructureDecomposition d3 = structure_decomposition(RSFunction::constant(diag({1, -1, 0.3})));
  CHECK(dist(d3.proj_plus, diag({1, 0, 0})) < 1e-12);
  CHECK(dist(d3.proj_minus, diag({0, 1, 0})) < 1e-12);
  CHECK(dist(d3.proj_defect, diag({0, 0, 1})) < 1e-12);

  // D with eigenvalue 1 splits off an invariant piece
  Generator g(35);
  const Matrix u = g.unitary(3);
  const Matrix d = u * diag({1.0, 0.2, -0.5}) * u.adjoint();
  const SelfadjointBlockSystem blk = selfadjoint_block(d, g.contraction(2, 3), g.hermitian_contraction(2));
  const StructureDecomposition sd = structure_decomposition(RSFunction::from_system(PassiveSelfadjointSystem(3, blk.T)));
  CHECK(sd.invariance_residual < 1e-8);
  CHECK(dist(sd.proj_plus + sd.proj_minus + sd.proj_defect, eye(3)) < 1e-12);
  CHECK(std::abs(sd.proj_plus.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("Omega_0 and its identities") {
  Generator g(36);
  for (int t = 0; t < 100; ++t) {
    const SelfadjointBlockSystem s = g.block_system(1 + t % 3, 1 + t % 4);
    const Omega0Result r0 = omega0(s.N, s.F_prime, s.F_doubleprime, 0.0);
    CHECK(r0.value.norm() < 1e-15);
    for (Complex z : {Complex(-0.4, 0.3), Complex(0.5, -0.5), Complex(0, 0.9), Complex(0.7, 0)}) {
      const Omega0Result r = omega0(s.N, s.F_prime, s.F_doubleprime, z);
      CHECK(r.worst() < 1e-9);
      CHECK(spectral_norm(r.value) <= std::abs(z) + 1e-12);
    }
  }
  // N = 0: Omega_0 vanishes
  const Matrix x = g.hermitian_contraction(2);
  CHECK(omega0(Matrix::Zero(2, 1), x, x, Complex(0.2, 0.2)).value.norm() < 1e-15);
  // coupling must hold
  const SelfadjointBlockSystem s = g.block_system(2, 2);
  try {
    omega0(s.N, s.F_prime, s.F_prime, 0.3);
    if (s.N.norm() > 1e-6) FAIL("expected CouplingMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CouplingMismatch);
  }
  // the system realizing Omega_0 is an RS function
  const SelfadjointBlockSystem s2 = g.block_system(2, 3);
  const PassiveSelfadjointSystem sys0 = omega0_system(s2.N, s2.F_prime, s2.F_doubleprime);
  CHECK(rs_membership(RSFunction::from_system(sys0), default_rs_grid()).passed);
  const Complex z(0.1, 0.6);
  CHECK(dist(transfer(sys0, z), omega0(s2.N, s2.F_prime, s2.F_doubleprime, z).value) < 1e-12);
}

TEST_CASE("minimality") {
  Generator g(37);
  // C^* onto K
  const PassiveSelfadjointSystem onto = PassiveSelfadjointSystem::from_blocks(Matrix::Zero(2, 2), 0.5 * eye(2), Matrix::Zero(2, 2));
  CHECK(minimality_check(onto));
  const PassiveSelfadjointSystem c0 = PassiveSelfadjointSystem::from_blocks(Matrix::Zero(2, 2), Matrix::Zero(2, 3), 0.5 * eye(3));
  CHECK_FALSE(minimality_check(c0));
  for (int t = 0; t < 10; ++t) {
    const PassiveSelfadjointSystem s = g.system(2, 3);
    if (!minimality_check(s)) continue;
    const Matrix u = g.unitary(3);
    const PassiveSelfadjointSystem rotated = PassiveSelfadjointSystem::from_blocks(s.D(), s.C() * u, u.adjoint() * s.F() * u);
    CHECK(minimality_check(rotated));
    CHECK(dist(transfer(rotated, Complex(0.3, 0.3)), transfer(s, Complex(0.3, 0.3))) < 1e-12);
  }
}
