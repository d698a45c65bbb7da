#include "stieltjes/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stieltjes {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& a) {
  return Eigen::JacobiSVD<Matrix>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Index numerical_rank(const RealVector& s, double tol, double ref) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = tol * std::max(s(0), ref);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

}  // namespace

Subspace::Subspace(Index n, Matrix b) : ambient_dim(n), basis(std::move(b)) {
  if (basis.rows() != n)
    throw Error(ErrorKind::DimensionMismatch, "subspace basis row count != ambient dimension");
}

Subspace Subspace::zero(Index n) { return Subspace(n, Matrix(n, 0)); }
Subspace Subspace::full(Index n) { return Subspace(n, Matrix::Identity(n, n)); }

Matrix Subspace::projector() const { return basis * basis.adjoint(); }

double Subspace::residual(const Vector& v) const {
  if (dim() == 0) return v.norm();
  return (v - basis * (basis.adjoint() * v)).norm();
}

Subspace orthonormal_column_basis(const Matrix& a, double tol, double ref) {
  const Index n = a.rows();
  if (a.cols() == 0 || n == 0) return Subspace::zero(n);
  auto svd = full_svd(a);
  const Index r = numerical_rank(svd.singularValues(), tol, ref);
  return Subspace(n, svd.matrixU().leftCols(r));
}

Matrix null_space(const Matrix& a, double tol, double ref) {
  const Index c = a.cols();
  if (c == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(c, c);
  auto svd = full_svd(a);
  const Index r = numerical_rank(svd.singularValues(), tol, ref);
  return svd.matrixV().rightCols(c - r);
}

Subspace orthogonal_complement(const Subspace& s) {
  const Index n = s.ambient_dim;
  if (s.dim() == 0) return Subspace::full(n);
  if (s.dim() == n) return Subspace::zero(n);
  // ker of basis^H is the complement
  return Subspace(n, null_space(s.basis.adjoint(), kRankTol));
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim != b.ambient_dim)
    throw Error(ErrorKind::DimensionMismatch, "subspace_sum: ambient dimensions differ");
  Matrix m(a.ambient_dim, a.dim() + b.dim());
  m << a.basis, b.basis;
  return orthonormal_column_basis(m, tol);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim != b.ambient_dim)
    throw Error(ErrorKind::DimensionMismatch, "subspace_intersection: ambient dimensions differ");
  const Index n = a.ambient_dim;
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(n);
  // x = A s = B t  <=>  [A, -B] (s; t) = 0
  Matrix m(n, a.dim() + b.dim());
  m << a.basis, -b.basis;
  Matrix k = null_space(m, tol);
  return orthonormal_column_basis(a.basis * k.topRows(a.dim()), tol);
}

Matrix pinv(const Matrix& a, double tol, double ref) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const Index r = numerical_rank(s, tol, ref);
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  for (Index i = 0; i < r; ++i)
    out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  return out;
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix imaginary_part(const Matrix& a) {
  return (a - a.adjoint()) / Complex(0.0, 2.0);
}

RealVector eig_hermitian(const Matrix& h) {
  if (h.rows() != h.cols())
    throw Error(ErrorKind::ShapeMismatch, "eig_hermitian: matrix not square");
  if (h.rows() == 0) return RealVector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eig_hermitian(const Matrix& h) {
  RealVector w = eig_hermitian(h);
  return w.size() ? w.minCoeff() : std::numeric_limits<double>::infinity();
}

double max_eig_hermitian(const Matrix& h) {
  RealVector w = eig_hermitian(h);
  return w.size() ? w.maxCoeff() : -std::numeric_limits<double>::infinity();
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

Matrix sqrt_psd(const Matrix& h, double tol) {
  if (h.rows() != h.cols())
    throw Error(ErrorKind::ShapeMismatch, "sqrt_psd: matrix not square");
  const Index n = h.rows();
  if (n == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector w = es.eigenvalues();
  // unit floor: inputs here are normalized (defects, I + T_R), so an
  // all-round-off matrix must come out as zero
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (w.minCoeff() < -tol * scale)
    throw Error(ErrorKind::NotPSD, "sqrt_psd: negative eigenvalue", w.minCoeff());
  // round-off sized eigenvalues are zeros; keeping their square roots would
  // leave ~1e-8 garbage in defect operators of exact isometries
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (Index i = 0; i < n; ++i) w(i) = w(i) <= floor ? 0.0 : std::sqrt(w(i));
  const Matrix& u = es.eigenvectors();
  return u * w.cast<Complex>().asDiagonal() * u.adjoint();
}

double subspace_distance(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim != v.ambient_dim)
    throw Error(ErrorKind::DimensionMismatch, "subspace_distance: ambient dimensions differ");
  if (u.dim() != v.dim()) return 1.0;
  if (u.dim() == 0) return 0.0;
  return spectral_norm(u.projector() - v.projector());
}

bool subspace_equal(const Subspace& u, const Subspace& v, double tol) {
  return subspace_distance(u, v) < tol;
}

bool subspace_contains(const Subspace& outer, const Subspace& inner, double tol) {
  if (outer.ambient_dim != inner.ambient_dim)
    throw Error(ErrorKind::DimensionMismatch, "subspace_contains: ambient dimensions differ");
  if (inner.dim() == 0) return true;
  Matrix rest = inner.basis;
  if (outer.dim() > 0) rest -= outer.basis * (outer.basis.adjoint() * inner.basis);
  return spectral_norm(rest) < tol;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const RealVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0 || a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Matrix solve_guarded(const Matrix& a, const Matrix& b, double cond_limit) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw Error(ErrorKind::ShapeMismatch, "solve_guarded: incompatible shapes");
  if (a.rows() == 0) return Matrix(0, b.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  const double cond = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= cond_limit))
    throw Error(ErrorKind::IllConditioned, "solve_guarded: condition estimate above limit", cond);
  return svd.solve(b);
}

Matrix inverse_guarded(const Matrix& a, double cond_limit) {
  return solve_guarded(a, Matrix::Identity(a.rows(), a.rows()), cond_limit);
}

DyadicLimit dyadic_limit(const std::function<Matrix(double)>& f, int k_min,
                         int k_max, double tol) {
  DyadicLimit out;
  Matrix prev_value = f(std::ldexp(1.0, -k_min));
  Matrix prev_extrap;
  bool have_extrap = false;
  for (int k = k_min + 1; k <= k_max; ++k) {
    Matrix value = f(std::ldexp(1.0, -k));
    Matrix extrap = 2.0 * value - prev_value;
    ++out.steps;
    if (have_extrap) {
      out.last_change = spectral_norm(extrap - prev_extrap);
      out.value = extrap;
      if (out.last_change < tol) {
        out.converged = true;
        return out;
      }
    }
    prev_extrap = extrap;
    have_extrap = true;
    prev_value = value;
  }
  if (!have_extrap) out.value = prev_value;
  return out;
}

}  // namespace stieltjes
