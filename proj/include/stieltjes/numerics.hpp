#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "stieltjes/error.hpp"

namespace stieltjes {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kRankTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kConditionLimit = 1e12;

// Orthonormal basis of a subspace of C^n (columns).
struct Subspace {
  Index ambient_dim = 0;
  Matrix basis;

  Subspace() = default;
  Subspace(Index n, Matrix b);

  static Subspace zero(Index n);
  static Subspace full(Index n);

  Index dim() const { return basis.cols(); }
  Matrix projector() const;
  // distance of v from the subspace
  double residual(const Vector& v) const;
};

// Rank decisions cut singular values at tol * max(s_max, ref); ref = 1 makes
// tol absolute for blocks of orthonormal bases.
Subspace orthonormal_column_basis(const Matrix& a, double tol = kRankTol, double ref = 0.0);
// Orthonormal basis of ker a.
Matrix null_space(const Matrix& a, double tol = kRankTol, double ref = 0.0);
Subspace orthogonal_complement(const Subspace& s);
Subspace subspace_sum(const Subspace& a, const Subspace& b, double tol = kRankTol);
Subspace subspace_intersection(const Subspace& a, const Subspace& b,
                               double tol = kRankTol);

Matrix pinv(const Matrix& a, double tol = kRankTol, double ref = 0.0);
Matrix sqrt_psd(const Matrix& h, double tol = kPsdTol);

// ||P_U - P_V||_2, i.e. sine of the largest principal angle; 1 when the
// dimensions differ.
double subspace_distance(const Subspace& u, const Subspace& v);
bool subspace_equal(const Subspace& u, const Subspace& v, double tol = 1e-8);
bool subspace_contains(const Subspace& outer, const Subspace& inner,
                       double tol = 1e-8);

Matrix hermitian_part(const Matrix& a);
Matrix imaginary_part(const Matrix& a);  // (A - A^H)/(2i)
double min_eig_hermitian(const Matrix& h);
double max_eig_hermitian(const Matrix& h);
RealVector eig_hermitian(const Matrix& h);
bool is_hermitian(const Matrix& a, double tol = 1e-10);

double spectral_norm(const Matrix& a);
double condition_number(const Matrix& a);

// Solves a x = b for square a; IllConditioned above the condition limit.
Matrix solve_guarded(const Matrix& a, const Matrix& b,
                     double cond_limit = kConditionLimit);
Matrix inverse_guarded(const Matrix& a, double cond_limit = kConditionLimit);

// (x, y) = y^H x
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

struct DyadicLimit {
  Matrix value;
  double last_change = 0.0;
  int steps = 0;
  bool converged = false;
};

// Limit of f(eps) as eps -> 0 along eps_k = 2^-k, k = k_min..k_max, using
// first-order Richardson R_k = 2 f(eps_{k+1}) - f(eps_k). Converged once two
// successive extrapolants differ by less than tol in spectral norm.
DyadicLimit dyadic_limit(const std::function<Matrix(double)>& f, int k_min,
                         int k_max, double tol);

}  // namespace stieltjes
