#pragma once

#include <optional>
#include <vector>

#include "stieltjes/families.hpp"

namespace stieltjes {

// Atomic spectral measure of the operator part of a nonnegative selfadjoint
// relation, lifted to the ambient space.
struct SpectralMeasure {
  std::vector<double> nodes;       // strictly increasing, >= 0
  std::vector<Matrix> projectors;  // mutually orthogonal, summing to P_o
  Matrix P_o;                      // projector onto the complement of mul
  Matrix P_perp;                   // projector onto mul
  Matrix P_zero;                   // projector onto ran of the operator part
};

SpectralMeasure spectral_measure(const LinearRelation& a_hat, double cluster_tol = 1e-9);

struct RepresentationAtom {
  double t = 0.0;
  Matrix weight;
};

struct IntegralRepresentation {
  FamilyKind kind = FamilyKind::Stieltjes;
  Matrix Gamma;
  std::optional<Matrix> Pi;  // inverse kind only
  std::vector<RepresentationAtom> atoms;
  // per basis vector: |moment sum - expected norm^2|
  double moment_residual = 0.0;
};

// Gamma + sum W_i/(t_i - l) for Z^* Q0 Z with bounded Z
IntegralRepresentation stieltjes_rep(const StieltjesConstruction& cons, double tol = 1e-10);
// Gamma + l Pi + sum (1/(t_i - l) - 1/t_i) W_i for Y^* R0((A_hat^{-1}, V), l) Y
// with Y = cons.Z bounded
IntegralRepresentation inverse_stieltjes_rep(const StieltjesConstruction& cons,
                                             double tol = 1e-10);

Matrix evaluate_rep(const IntegralRepresentation& rep, Complex lambda);

// 20 points: |l| in {0.25, 1, 4, 16}, five angles each in the upper and lower plane
std::vector<Complex> default_rep_grid();

// max || evaluate_rep - reference || over the grid
double reconstruction_error(const IntegralRepresentation& rep,
                            const StieltjesConstruction& cons,
                            const std::vector<Complex>& grid);

}  // namespace stieltjes
