#pragma once

#include <limits>

#include "stieltjes/numerics.hpp"

namespace stieltjes {

inline constexpr double kContractionTol = 1e-10;

// D_T = (I - T^H T)^{1/2}
Matrix defect(const Matrix& t, double tol = kContractionTol);
void require_contraction(const Matrix& t, const char* what, double tol = kContractionTol);

// ||T sin(a) +- i cos(a) I|| <= 1 + tol; at a = 0 this is "T is a Hermitian
// contraction".
bool class_angle_check(const Matrix& t, double alpha, double tol = 1e-10);

// Smallest angle with class membership, found by bisection (resolution 1e-8).
// +infinity when no angle below pi/2 works.
double min_class_angle(const Matrix& t, double tol = 1e-10);

// T = [[D, B], [C, F]] : M (+) L -> N (+) K with
// B = N D_D, C = D_{D*} G, F = -N D^* G + D_{N*} L D_G.
struct BlockContraction {
  Matrix D, N, G, L;
  Matrix B, C, F;
  Matrix T;
};

BlockContraction build_block_contraction(const Matrix& d, const Matrix& n, const Matrix& g,
                                         const Matrix& l, double tol = kContractionTol);
BlockContraction decompose_block_contraction(const Matrix& t, Index row_split,
                                             Index col_split, double tol = kContractionTol);
BlockContraction decompose_block_contraction(const Matrix& t, Index split,
                                             double tol = kContractionTol);

// Selfadjoint case: T = [[D, C], [C^*, F]] on M (+) K with C^* = N D_D and
// F = -N D N^* + D_{N*} X D_{N*}.
struct SelfadjointBlockSystem {
  Matrix D, N, X;
  Matrix T, F, F_prime, F_doubleprime;

  Index dim_m() const { return D.rows(); }
  Index dim_k() const { return F.rows(); }
  Matrix C() const { return T.topRightCorner(dim_m(), dim_k()); }
};

SelfadjointBlockSystem selfadjoint_block(const Matrix& d, const Matrix& n, const Matrix& x,
                                         double tol = kContractionTol);

struct SigmaPair {
  Matrix plus, minus;
  double residual_plus = 0.0, residual_minus = 0.0;
};

SigmaPair sigma_pm(const SelfadjointBlockSystem& sys, Complex z, double tol = 1e-9);

struct WFunction {
  Matrix value;
  double residual = 0.0;
};

WFunction w_function(const SelfadjointBlockSystem& sys, Complex z, double tol = 1e-9);

struct BoundaryLimits {
  Matrix at_plus_one, at_minus_one;
  double change_plus = 0.0, change_minus = 0.0;
  int steps_plus = 0, steps_minus = 0;
  double error_plus = 0.0, error_minus = 0.0;  // against F', F''
};

// B(x) = F + x C^*(I - x D)^{-1} C along x = +-(1 - 2^-k), k = 6..20.
BoundaryLimits boundary_limits(const SelfadjointBlockSystem& sys);

// Projector onto the closure of the range of a defect operator.
Matrix range_projector(const Matrix& a, double tol = kRankTol);

}  // namespace stieltjes
