#include "stieltjes/generators.hpp"

#include <algorithm>
#include <cmath>

#include "stieltjes/contractions.hpp"

namespace stieltjes {

double Generator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

double Generator::normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

int Generator::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool Generator::coin(double p) { return uniform(0.0, 1.0) < p; }

Matrix Generator::complex_matrix(Index rows, Index cols) {
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = Complex(normal(), normal()) / std::sqrt(2.0);
  return a;
}

Matrix Generator::unitary(Index n) {
  Eigen::HouseholderQR<Matrix> qr(complex_matrix(n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix Generator::contraction(Index rows, Index cols) {
  const Matrix a = complex_matrix(rows, cols);
  const double nrm = spectral_norm(a);
  const double target = uniform(0.3, 0.99);
  if (nrm == 0.0) return a;
  return a * (target / nrm);
}

Matrix Generator::hermitian_contraction(Index n) {
  const Matrix u = unitary(n);
  RealVector e(n);
  for (Index i = 0; i < n; ++i) e(i) = uniform(-0.95, 0.95);
  if (n > 0 && coin(0.3)) {
    const int hits = integer(1, static_cast<int>(n));
    for (int i = 0; i < hits; ++i) e(i) = coin(0.5) ? 1.0 : -1.0;
  }
  return hermitian_part(u * e.cast<Complex>().asDiagonal() * u.adjoint());
}

Matrix Generator::psd(Index n, Index rank) {
  const Matrix b = complex_matrix(n, rank);
  return hermitian_part(b * b.adjoint());
}

LinearRelation Generator::relation(Index n) {
  const Index d = integer(0, static_cast<int>(2 * n));
  const Matrix g = complex_matrix(2 * n, d);
  return LinearRelation(n, orthonormal_column_basis(g));
}

LinearRelation Generator::nonnegative_relation(Index n) {
  const Index mul_dim = n > 0 && coin(0.3) ? integer(1, static_cast<int>(n)) : 0;
  return nonnegative_relation(n, mul_dim);
}

LinearRelation Generator::nonnegative_relation(Index n, Index mul_dim) {
  const Matrix u = unitary(n);
  const Index d = n - mul_dim;
  RealVector t(d);
  for (Index i = 0; i < d; ++i) t(i) = std::exp(normal());
  if (d > 0 && coin(0.2)) t(integer(0, static_cast<int>(d - 1))) = 0.0;
  Matrix first = Matrix::Zero(n, n), second = Matrix::Zero(n, n);
  for (Index i = 0; i < d; ++i) {
    first.col(i) = u.col(i);
    second.col(i) = t(i) * u.col(i);
  }
  for (Index i = d; i < n; ++i) second.col(i) = u.col(i);
  return LinearRelation::from_pairs(first, second);
}

SelfadjointBlockSystem Generator::block_system(Index m, Index k) {
  const Matrix d = hermitian_contraction(m);
  const Matrix nn = contraction(k, m);
  const Matrix x = hermitian_contraction(k);
  return selfadjoint_block(d, nn, x, 1e-9);
}

PassiveSelfadjointSystem Generator::system(Index m, Index k) {
  return PassiveSelfadjointSystem(m, block_system(m, k).T, 1e-9);
}

StieltjesConstruction Generator::construction(Index m, Index k, bool identity_z) {
  const LinearRelation a = nonnegative_relation(k);
  const Matrix v = contraction(k, m);
  const Matrix z = identity_z ? Matrix::Identity(m, m) : complex_matrix(m, m);
  return StieltjesConstruction::make(a, v, z);
}

Matrix Generator::sectorial(Index n, double angle) {
  const Matrix r = psd(n, n) + 0.1 * Matrix::Identity(n, n);
  Matrix b = hermitian_part(complex_matrix(n, n));
  const double nb = spectral_norm(b);
  if (nb > 0.0) b *= std::tan(angle) * uniform(0.0, 1.0) / nb;
  const Matrix s = sqrt_psd(r);
  return s * (Matrix::Identity(n, n) + Complex(0, 1) * b) * s;
}

}  // namespace stieltjes
