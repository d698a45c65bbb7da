#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stieltjes/contractions.hpp"
#include "stieltjes/generators.hpp"
#include "stieltjes/linrel.hpp"
#include "test_support.hpp"

using namespace stieltjes;
using namespace testing_support;

TEST_CASE("defect operators") {
  Generator g(21);
  CHECK(defect(g.unitary(3)).norm() < 1e-12);
  CHECK(dist(defect(Matrix::Zero(2, 2)), eye(2)) < 1e-15);
  CHECK(dist(defect(diag({0.6, 0.8})), diag({0.8, 0.6})) < 1e-14);
  CHECK_THROWS_AS(defect(diag({1.5, 0})), Error);
  for (int t = 0; t < 200; ++t) {
    const Index r = 1 + t % 4, c = 1 + (t / 4) % 4;
    const Matrix x = g.contraction(r, c);
    // T D_T = D_{T*} T
    CHECK(dist(x * defect(x), defect(x.adjoint()) * x) < 1e-10);
  }
}

TEST_CASE("class C_H(alpha) membership") {
  Generator g(22);
  const Matrix h = g.hermitian_contraction(3);
  CHECK(class_angle_check(h, 0.0));
  for (double a : {0.1, 0.7, 1.5}) CHECK_FALSE(class_angle_check(I1 * eye(2), a));
  CHECK(min_class_angle(h) == 0.0);

  // Cayley transforms of sectorial matrices with semi-angle 0.3 lie in C_H(0.3)
  for (int t = 0; t < 20; ++t) {
    const Matrix a = g.sectorial(3, 0.3);
    const Matrix c = to_operator(cayley(LinearRelation::from_operator(a)));
    CHECK(class_angle_check(c, 0.3, 1e-9));
    // monotone in alpha
    const double amin = min_class_angle(c, 1e-9);
    CHECK(amin <= 0.3 + 1e-8);
    for (double a2 : {amin + 1e-6, 0.5, 1.0, 1.4}) CHECK(class_angle_check(c, a2, 1e-9));
  }

  // T = i tan(b/2) I: the scalar bound tan a >= 2|Im t|/(1-|t|^2) is tight at a = b
  const double beta = 0.4;
  const Matrix t = I1 * std::tan(beta / 2) * eye(2);
  CHECK(std::abs(min_class_angle(t) - beta) < 1e-6);

  // ||T|| = 1 with a nonreal value on an isometric vector: no angle below pi/2
  CHECK(std::isinf(min_class_angle(diag({Complex(0.6, 0.8), 0.2}))));
}

TEST_CASE("block contraction parametrization") {
  Matrix z1 = Matrix::Zero(1, 1), o1 = eye(1);
  const BlockContraction b = build_block_contraction(z1, o1, o1, z1);
  CHECK(dist(b.T, mat(2, 2, {0, 1, 1, 0})) < 1e-14);
  CHECK(spectral_norm(b.T) == doctest::Approx(1.0));
  const BlockContraction back = decompose_block_contraction(b.T, 1);
  CHECK(std::abs(back.D(0, 0)) < 1e-14);
  CHECK(std::abs(back.N(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(back.G(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(back.L(0, 0)) < 1e-12);

  // D unitary: the defect spaces collapse
  Generator g(23);
  const Matrix u = g.unitary(2);
  const BlockContraction bu = build_block_contraction(u, g.contraction(2, 2), g.contraction(2, 2), g.contraction(2, 2));
  CHECK(bu.B.norm() < 1e-10);
  CHECK(bu.C.norm() < 1e-10);
  CHECK(spectral_norm(bu.T) <= 1 + 1e-12);

  const BlockContraction diag_case = decompose_block_contraction(diag({0.5, 0.5}), 1);
  CHECK(diag_case.N.norm() < 1e-14);
  CHECK(diag_case.B.norm() < 1e-14);

  CHECK_THROWS_AS(build_block_contraction(eye(2), eye(3), eye(2), eye(3)), Error);
  CHECK_THROWS_AS(build_block_contraction(2.0 * eye(1), o1, o1, z1), Error);

  for (int t = 0; t < 100; ++t) {
    const Index p = 1 + t % 4, q = 1 + (t / 4) % 3, r = 1 + (t / 12) % 3, s = 1 + t % 3;
    const BlockContraction bc = build_block_contraction(g.contraction(p, q), g.contraction(r, q),
                                                        g.contraction(p, s), g.contraction(r, s));
    CHECK(spectral_norm(bc.T) <= 1 + 1e-12);
    const BlockContraction dc = decompose_block_contraction(bc.T, p, q);
    const BlockContraction rebuilt = build_block_contraction(dc.D, dc.N, dc.G, dc.L);
    CHECK(dist(rebuilt.T, bc.T) < 1e-9);
  }
  // round trip starting from arbitrary contractions, dims up to 6
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + t % 5, split = 1 + t % (n - 1);
    const Matrix x = g.contraction(n, n);
    const BlockContraction dc = decompose_block_contraction(x, split);
    CHECK(dist(build_block_contraction(dc.D, dc.N, dc.G, dc.L).T, x) < 1e-9);
  }
}

TEST_CASE("selfadjoint block systems") {
  Generator g(24);
  const Matrix x = g.hermitian_contraction(2);
  const SelfadjointBlockSystem dec = selfadjoint_block(g.hermitian_contraction(2), Matrix::Zero(2, 2), x);
  CHECK(dist(dec.F, x) < 1e-12);
  CHECK(dist(dec.F_prime, x) < 1e-12);
  CHECK(dist(dec.F_doubleprime, x) < 1e-12);

  const SelfadjointBlockSystem s0 = selfadjoint_block(Matrix::Zero(2, 2), eye(2), Matrix::Zero(2, 2));
  CHECK(s0.F.norm() < 1e-12);
  CHECK(dist(s0.F_prime, eye(2)) < 1e-12);
  CHECK(dist(s0.F_doubleprime, -eye(2)) < 1e-12);

  CHECK_THROWS_AS(selfadjoint_block(mat(2, 2, {0, 0.5, 0, 0}), eye(2), eye(2)), Error);

  for (int t = 0; t < 100; ++t) {
    const SelfadjointBlockSystem s = g.block_system(1 + t % 4, 1 + t % 5);
    CHECK(is_hermitian(s.T, 1e-12));
    CHECK(spectral_norm(s.T) <= 1 + 1e-12);
    CHECK(dist(s.F_prime - s.F_doubleprime, 2.0 * s.N * s.N.adjoint()) < 1e-11);
    CHECK(spectral_norm(s.F_prime) <= 1 + 1e-12);
    CHECK(spectral_norm(s.F_doubleprime) <= 1 + 1e-12);
    CHECK(min_eig_hermitian(s.F_prime - s.F_doubleprime) >= -1e-10);
  }
}

TEST_CASE("Sigma_pm and W identities") {
  Generator g(25);
  const SelfadjointBlockSystem s = g.block_system(2, 3);
  const SigmaPair z0 = sigma_pm(s, 0.0);
  CHECK(z0.plus.norm() < 1e-15);
  CHECK(z0.minus.norm() < 1e-15);
  CHECK(dist(w_function(s, 0.0).value, eye(2)) < 1e-15);

  const SelfadjointBlockSystem n0 = selfadjoint_block(g.hermitian_contraction(2), Matrix::Zero(3, 2), g.hermitian_contraction(3));
  const SigmaPair zn = sigma_pm(n0, Complex(0.3, 0.4));
  CHECK(zn.plus.norm() < 1e-15);
  CHECK(zn.minus.norm() < 1e-15);

  const SelfadjointBlockSystem d0 = selfadjoint_block(Matrix::Zero(2, 2), g.contraction(3, 2), g.hermitian_contraction(3));
  CHECK(dist(w_function(d0, Complex(0.2, -0.6)).value, eye(2)) < 1e-14);

  CHECK(sigma_pm(s, Complex(0, 0.5)).residual_plus < 1e-9);
  CHECK(w_function(s, -0.7).residual < 1e-9);
  CHECK_THROWS_AS(sigma_pm(s, 1.5), Error);

  for (int t = 0; t < 100; ++t) {
    const SelfadjointBlockSystem st = g.block_system(1 + t % 3, 1 + t % 4);
    for (Complex z : {Complex(0, 0.5), Complex(-0.4, 0.3), Complex(0.8, -0.1), Complex(-0.9, 0)}) {
      const SigmaPair sp = sigma_pm(st, z);
      CHECK(std::max(sp.residual_plus, sp.residual_minus) < 1e-9);
      CHECK(w_function(st, z).residual < 1e-9);
    }
  }
}

TEST_CASE("boundary limits of B(x)") {
  Generator g(26);
  // strictly contractive D: direct substitution at x = +-1
  const Matrix d = 0.5 * g.hermitian_contraction(2);
  const SelfadjointBlockSystem s = selfadjoint_block(d, g.contraction(3, 2), g.hermitian_contraction(3));
  const BoundaryLimits b = boundary_limits(s);
  const Matrix c = s.C(), cs = c.adjoint();
  const Matrix direct_plus = s.F + cs * (eye(2) - d).inverse() * c;
  const Matrix direct_minus = s.F - cs * (eye(2) + d).inverse() * c;
  CHECK(dist(direct_plus, s.F_prime) < 1e-10);
  CHECK(dist(direct_minus, s.F_doubleprime) < 1e-10);
  CHECK(dist(b.at_plus_one, s.F_prime) < 1e-8);
  CHECK(dist(b.at_minus_one, s.F_doubleprime) < 1e-8);

  const SelfadjointBlockSystem n0 = selfadjoint_block(d, Matrix::Zero(3, 2), g.hermitian_contraction(3));
  const BoundaryLimits bn = boundary_limits(n0);
  CHECK(dist(bn.at_plus_one, n0.F) < 1e-12);
  CHECK(dist(bn.at_minus_one, n0.F) < 1e-12);

  // D with eigenvalue 1: the limit is still F'
  const Matrix u = g.unitary(2);
  const Matrix d1 = u * diag({1.0, 0.3}) * u.adjoint();
  const SelfadjointBlockSystem s1 = selfadjoint_block(d1, g.contraction(3, 2), g.hermitian_contraction(3));
  const BoundaryLimits b1 = boundary_limits(s1);
  CHECK(b1.error_plus < 1e-6);
  CHECK(b1.error_minus < 1e-6);
}
