#include <cmath>

#include "doctest.h"
#include "stieltjes/generators.hpp"
#include "test_support.hpp"

using namespace stieltjes;
using namespace testing_support;

TEST_CASE("orthonormal basis of identity, zero and rank-one matrices") {
  CHECK(orthonormal_column_basis(eye(3)).dim() == 3);
  CHECK(orthonormal_column_basis(Matrix::Zero(3, 3)).dim() == 0);
  const Subspace s = orthonormal_column_basis(mat(2, 2, {1, 1, 1, 1}));
  REQUIRE(s.dim() == 1);
  // span of (1,1)/sqrt2, up to phase
  CHECK(std::abs(s.basis(0, 0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(s.basis(0, 0) - s.basis(1, 0)) < 1e-14);
}

TEST_CASE("reference scale makes the rank cut absolute") {
  const Matrix tiny = 1e-16 * eye(2);
  CHECK(orthonormal_column_basis(tiny).dim() == 2);
  CHECK(orthonormal_column_basis(tiny, kRankTol, 1.0).dim() == 0);
  CHECK(null_space(tiny, kRankTol, 1.0).cols() == 2);
}

TEST_CASE("pinv examples and Penrose identities") {
  CHECK(dist(pinv(eye(3)), eye(3)) < 1e-15);
  CHECK(dist(pinv(diag({2, 0})), diag({0.5, 0})) < 1e-15);
  Generator g(11);
  for (int t = 0; t < 50; ++t) {
    const Index r = 1 + t % 5, c = 1 + (t / 5) % 5;
    Matrix a = g.complex_matrix(r, c);
    if (t % 3 == 0 && c > 1) a.col(0) = a.col(1) * Complex(2, -1);  // rank deficient
    const Matrix p = pinv(a);
    const double s = std::max(1.0, spectral_norm(a));
    CHECK(dist(a * p * a, a) < 1e-10 * s);
    CHECK(dist(p * a * p, p) < 1e-10 * spectral_norm(p));
    CHECK(dist((a * p).adjoint(), a * p) < 1e-10);
    CHECK(dist((p * a).adjoint(), p * a) < 1e-10);
    CHECK(dist(pinv(p), a) < 1e-9 * s);
  }
}

TEST_CASE("sqrt_psd") {
  CHECK(dist(sqrt_psd(eye(3)), eye(3)) < 1e-15);
  CHECK(dist(sqrt_psd(diag({4, 9})), diag({2, 3})) < 1e-14);
  CHECK_THROWS_AS(sqrt_psd(diag({1, -0.5})), Error);
  Generator g(5);
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 8;
    const Matrix h = g.psd(n, 1 + t % n);
    const Matrix s = sqrt_psd(h);
    CHECK(dist(s * s, h) < 1e-11 * std::max(1.0, spectral_norm(h)));
    CHECK(min_eig_hermitian(s) > -1e-12);
  }
}

TEST_CASE("sqrt_psd clamps round-off sized eigenvalues") {
  // I - U^H U for unitary U is pure round-off
  Generator g(3);
  const Matrix u = g.unitary(4);
  CHECK(sqrt_psd(eye(4) - u.adjoint() * u).norm() < 1e-12);
}

TEST_CASE("subspace equality") {
  const Index n = 3;
  auto span = [&](std::initializer_list<Complex> v) {
    Matrix b(n, 1);
    Index i = 0;
    for (Complex x : v) b(i++, 0) = x;
    return orthonormal_column_basis(b);
  };
  CHECK(subspace_equal(span({1, 0, 0}), span({-1, 0, 0})));
  CHECK_FALSE(subspace_equal(span({1, 0, 0}), span({0, 1, 0})));
  CHECK(subspace_equal(span({1, 1, 0}), span({2, 2, 0})));
  CHECK_THROWS_AS(subspace_equal(Subspace::full(2), Subspace::full(3)), Error);

  // equivalence relation on random triples built from one span
  Generator g(8);
  for (int t = 0; t < 20; ++t) {
    const Matrix b = g.complex_matrix(4, 2);
    const Subspace u = orthonormal_column_basis(b);
    const Subspace v = orthonormal_column_basis(b * g.complex_matrix(2, 2));
    const Subspace w = orthonormal_column_basis(b * g.complex_matrix(2, 2));
    CHECK(subspace_equal(u, u));
    CHECK(subspace_equal(u, v) == subspace_equal(v, u));
    CHECK(subspace_equal(u, v));
    CHECK(subspace_equal(v, w));
    CHECK(subspace_equal(u, w));
  }
}

TEST_CASE("intersection, sum and complement") {
  const Subspace e12 = orthonormal_column_basis(mat(3, 2, {1, 0, 0, 1, 0, 0}));
  const Subspace e23 = orthonormal_column_basis(mat(3, 2, {0, 0, 1, 0, 0, 1}));
  const Subspace cap = subspace_intersection(e12, e23);
  REQUIRE(cap.dim() == 1);
  CHECK(std::abs(cap.basis(1, 0)) == doctest::Approx(1.0));
  CHECK(subspace_sum(e12, e23).dim() == 3);
  const Subspace perp = orthogonal_complement(e12);
  REQUIRE(perp.dim() == 1);
  CHECK(std::abs(perp.basis(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("eigenvalue helpers") {
  CHECK(min_eig_hermitian(eye(3)) == doctest::Approx(1.0));
  CHECK(min_eig_hermitian(diag({-2, 5})) == doctest::Approx(-2.0));
  // the Hermitian part is used, so a skew perturbation is ignored
  CHECK(min_eig_hermitian(diag({-2, 5}) + mat(2, 2, {0, 1, -1, 0})) == doctest::Approx(-2.0));
  Generator g(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = g.complex_matrix(5, 3);
    CHECK(min_eig_hermitian(x.adjoint() * x) >= -1e-12);
  }
  CHECK(imaginary_part(I1 * eye(2)).isApprox(eye(2)));
}

TEST_CASE("guarded solves") {
  const Matrix a = diag({1, 2});
  CHECK(dist(solve_guarded(a, eye(2)), diag({1, 0.5})) < 1e-15);
  try {
    solve_guarded(diag({1, 1e-14}), eye(2));
    FAIL("expected IllConditioned");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllConditioned);
    CHECK(e.residual() > 1e12);
  }
}

TEST_CASE("dyadic limit with first-order extrapolation") {
  // f(e) = A + e B has limit A; the extrapolant is exact
  const Matrix a = diag({1, 2}), b = diag({3, -4});
  const DyadicLimit lim = dyadic_limit([&](double e) { return Matrix(a + e * b); }, 2, 20, 1e-12);
  CHECK(lim.converged);
  CHECK(dist(lim.value, a) < 1e-12);
  // sqrt(e) converges too slowly for a tight tolerance in few steps
  const DyadicLimit slow = dyadic_limit(
      [](double e) { return Matrix::Constant(1, 1, std::sqrt(e)).eval(); }, 2, 8, 1e-12);
  CHECK_FALSE(slow.converged);
}
