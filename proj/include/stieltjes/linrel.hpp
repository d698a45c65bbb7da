#pragma once

#include <cstdint>
#include <vector>

#include "stieltjes/numerics.hpp"

namespace stieltjes {

// A linear relation in M = C^n, stored as an orthonormal basis of its graph
// in M (+) M. Columns of the basis are pairs [f; f'].
class LinearRelation {
 public:
  LinearRelation() = default;
  LinearRelation(Index space_dim, Subspace graph);

  // graph spanned by the columns of [first; second]
  static LinearRelation from_pairs(const Matrix& first, const Matrix& second,
                                   double tol = kRankTol);
  static LinearRelation from_operator(const Matrix& a);
  static LinearRelation purely_multivalued(Index n);  // {0} x M
  static LinearRelation zero_operator(Index n);       // M x {0}

  Index space_dim() const { return n_; }
  const Subspace& graph() const { return graph_; }
  Index dim() const { return graph_.dim(); }
  Matrix first() const { return graph_.basis.topRows(n_); }
  Matrix second() const { return graph_.basis.bottomRows(n_); }

 private:
  Index n_ = 0;
  Subspace graph_;
};

struct RelationParts {
  Subspace dom, ran, ker, mul;
};

RelationParts parts(const LinearRelation& r, double tol = kRankTol);

LinearRelation adjoint(const LinearRelation& r);
LinearRelation inverse(const LinearRelation& r);
LinearRelation scalar_shift(const LinearRelation& r, Complex lambda);  // R - lambda
LinearRelation scale(const LinearRelation& r, Complex c);              // c R
LinearRelation negate(const LinearRelation& r);
// {f, f' + B f}
LinearRelation add_operator(const LinearRelation& r, const Matrix& b);
// pairs {a f + b f', c f + d f'}
LinearRelation apply_block(const LinearRelation& r, Complex a, Complex b, Complex c,
                           Complex d);
// R S = {{f, h} : {f, g} in S, {g, h} in R}
LinearRelation compose(const LinearRelation& r, const LinearRelation& s);

LinearRelation cayley(const LinearRelation& a);

double relation_distance(const LinearRelation& a, const LinearRelation& b);
bool relation_equal(const LinearRelation& a, const LinearRelation& b, double tol = 1e-9);

// (R - lambda)^{-1} as a matrix
Matrix resolvent(const LinearRelation& r, Complex lambda, double tol = 1e-8);
// matrix of an everywhere defined single-valued relation; NotAnOperator
// otherwise
Matrix to_operator(const LinearRelation& r, double tol = 1e-10);

bool is_selfadjoint(const LinearRelation& r, double tol = 1e-9);
bool is_nonnegative(const LinearRelation& r, double tol = 1e-9);
bool is_nonpositive(const LinearRelation& r, double tol = 1e-9);

// Max residual of both closed forms expressing (A - lambda)^{-1} through
// T = C(A).
double verify_resolvent_connection(const LinearRelation& a, Complex lambda);

struct NumericalRangeSample {
  std::vector<Complex> values;
  std::size_t sample_count = 0;
};

NumericalRangeSample numerical_range(const LinearRelation& r, std::size_t samples,
                                     std::uint64_t seed);

struct OperatorPartDecomposition {
  Subspace mul;
  Subspace dom;
  Subspace complement;  // M minus mul, basis Q
  Matrix ambient;       // operator part as n x n matrix, zero on mul
  Matrix local;         // Q^H ambient Q
  LinearRelation reassemble() const;
};

OperatorPartDecomposition operator_part(const LinearRelation& r, double tol = 1e-8);

// Form order for semibounded selfadjoint relations, tested through
// resolvents at the point c below (nonnegative) or above (nonpositive) the
// spectra: A <= B iff (B - c)^{-1} <= (A - c)^{-1} for nonnegative pairs.
bool form_leq(const LinearRelation& a, const LinearRelation& b, bool nonnegative,
              double tol = 1e-9);

}  // namespace stieltjes
