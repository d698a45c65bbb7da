#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stieltjes/linrel.hpp"
#include "stieltjes/rs_functions.hpp"

namespace stieltjes {

enum class FamilyKind { Stieltjes, InverseStieltjes };

const char* to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& s);

// (A_hat, V, Z): A_hat nonnegative selfadjoint in K, V: M -> K contraction,
// Z an operator in M restricted to the subspace dom_Z.
struct StieltjesConstruction {
  LinearRelation A_hat;
  Matrix V;
  Matrix Z;
  Subspace dom_Z;

  static StieltjesConstruction make(const LinearRelation& a_hat, const Matrix& v,
                                    const Matrix& z);
  static StieltjesConstruction make(const LinearRelation& a_hat, const Matrix& v,
                                    const Matrix& z, const Subspace& dom_z);

  Index dim_m() const { return V.cols(); }
  Index dim_k() const { return V.rows(); }
  bool z_bounded() const { return dom_Z.dim() == dim_m(); }
  bool z_identity() const;
  void validate(double tol = 1e-9) const;
};

class Family {
 public:
  using RelationEval = std::function<LinearRelation(Complex)>;
  using MatrixEval = std::function<Matrix(Complex)>;

  FamilyKind kind = FamilyKind::Stieltjes;
  Index dim = 0;
  std::string label;
  RelationEval relation;
  MatrixEval value;  // set for bounded (matrix-valued) families
  // closed form on a fixed basis of the form domain: q[U a, U b] = b^H form(l) a
  Subspace form_basis;
  MatrixEval form;
  std::optional<RSFunction> omega;
  std::optional<StieltjesConstruction> construction;

  LinearRelation operator()(Complex lambda) const;
  bool bounded() const { return static_cast<bool>(value); }
};

bool on_positive_axis(Complex lambda);
Complex disk_point(Complex lambda);    // (1 + l)/(1 - l)
Complex plane_point(Complex z);        // (z - 1)/(z + 1)

LinearRelation from_rs(const RSFunction& omega, FamilyKind kind, Complex lambda);
Matrix to_rs(const Family& family, Complex z);

Family family_from_rs(const RSFunction& omega, FamilyKind kind);
// Z^* Q0 Z (Stieltjes) or Z^* R0 Z (inverse) as in the form construction
Family family_from_construction(const StieltjesConstruction& cons, FamilyKind kind);
Family family_from_values(FamilyKind kind, Index dim, Family::MatrixEval values,
                          std::string label);
// Q(l) = -H/l, realized exactly by a passive selfadjoint system
Family family_neg_h_over_lambda(const Matrix& h);
// RS handle behind a family: its own Omega if present, otherwise the graph
// transform of its values
RSFunction omega_of(const Family& family);

Matrix q0(const StieltjesConstruction& cons, Complex lambda);
Matrix r0(const StieltjesConstruction& cons, Complex lambda);

struct CheckedValue {
  Matrix value;
  double residual = 0.0;
};

CheckedValue neg_inv_q0(const StieltjesConstruction& cons, Complex lambda, double tol = 1e-9);

struct OperatorPartForms {
  Matrix q_value;       // expansion through the operator part of A_hat
  Matrix r_value;       // inverse-kind expansion, compared with R0 of A_hat^{-1}
  double q_residual = 0.0;
  double r_residual = 0.0;
};

OperatorPartForms q0_operator_part_form(const StieltjesConstruction& cons, Complex lambda,
                                        double tol = 1e-9);

// Omega whose graph transform gives Q0 (Stieltjes) or R0 (inverse).
PassiveSelfadjointSystem system_from_construction(const StieltjesConstruction& cons,
                                                  FamilyKind kind);

struct FormFamilyValue {
  Subspace basis;  // orthonormal basis of dom Z
  Matrix form;     // [q[u_i, u_j]] with entry (j, i)
  LinearRelation relation;
};

FormFamilyValue form_family(const StieltjesConstruction& cons, FamilyKind kind, Complex lambda);

struct SectorReport {
  Complex lambda;
  double phi = 0.0;
  double semi_angle = 0.0;
  NumericalRangeSample samples;
  double worst_violation = 0.0;  // sector inequality, relative to max(1,|v|)
  double worst_nevanlinna = 0.0;
  double worst_angle_excess = 0.0;
  double tol = 0.0;
  bool passed = true;
};

SectorReport sector_check(const Family& family, Complex lambda, std::size_t samples = 64,
                          std::uint64_t seed = 1, double tol = 1e-10);
// rotation phi and semi-angle of the sector containing the values at lambda
std::pair<double, double> sector_rotation(FamilyKind kind, Complex lambda);

struct ClosedFormRepresentation {
  Subspace domain;  // ran (I + T_R)^{1/2}
  Matrix g_local;   // G in the domain basis
  Matrix form_local;  // A[U a, U b] = b^H form_local a
  double phi = 0.0;
  double alpha = 0.0;  // class angle of the rotated Cayley transform
  Complex evaluate(const Vector& u, const Vector& v) const;
};

ClosedFormRepresentation closed_form_from_cayley(const LinearRelation& a, double phi = 0.0);

struct KernelReport {
  double extreme_eig = 0.0;  // min (Stieltjes) or max (inverse)
  std::size_t points = 0;
  std::size_t diagonal_blocks = 0;
  double tol = 0.0;
  bool passed = true;
};

KernelReport kernel_check(const Family& family, const std::vector<Complex>& grid,
                          double tol = 1e-7);

struct LowerBound {
  double c = 0.0;
  double c_rotated = 0.0;
  double phi = 0.0;
};

LowerBound lower_bound_constant(const Family& family, Complex lambda, double tol = 1e-12);

struct ResolventLimits {
  LinearRelation at_minus_zero;
  LinearRelation at_minus_infinity;
  Matrix omega_plus_one, omega_minus_one;
  std::string method_plus, method_minus;  // "direct" or "dyadic"
  double form_residual_zero = 0.0;
  double form_residual_infinity = 0.0;
  std::size_t form_checks = 0;
};

ResolventLimits resolvent_limits(const Family& family, double tol = 1e-9);
Matrix omega_boundary_value(const RSFunction& omega, double sign, std::string* method = nullptr);
// (f', f) over the operator part; f must lie in the form domain
Complex relation_form_value(const LinearRelation& r, const Vector& f);
// worst min-eig slack of Q(-inf) <= Q(x) <= Q(-0) in resolvent form order
double limits_order_slack(const Family& family, const ResolventLimits& lim,
                          const std::vector<double>& xs);

struct MonotoneLimitEntry {
  Vector f;
  bool lower_diverges = false;
  double lower_limit = 0.0;
  double lower_expected = 0.0;  // +inf when f is outside ran L(a)
  bool lower_agrees = false;
  bool upper_diverges = false;
  double upper_limit = 0.0;
  double upper_expected = 0.0;
  bool upper_agrees = false;
};

struct MonotoneLimitsReport {
  std::vector<MonotoneLimitEntry> entries;
  Matrix at_a, at_b;
  bool passed = true;
};

// L(x) on (a, b), PSD and monotone in form order. direction +1 for
// non-decreasing, -1 for non-increasing.
MonotoneLimitsReport monotone_form_limits(const std::function<Matrix(double)>& l, double a,
                                          double b, const std::vector<Vector>& tests,
                                          int direction = 1, double tol = 1e-6);

struct TransformCheck {
  std::string name;
  double worst = 0.0;
  bool passed = true;
};

struct TransformReport {
  std::vector<TransformCheck> checks;
  bool passed = true;
};

TransformReport transform_equivalences(const Family& family, const std::vector<Complex>& samples,
                                       std::size_t count = 64, std::uint64_t seed = 1,
                                       double tol = 1e-10);

struct DomainConstancyReport {
  double worst_distance = 0.0;
  double worst_cr_residual = 0.0;
  Index domain_dim = 0;
  bool passed = true;
};

DomainConstancyReport form_domain_constancy(const Family& family,
                                            const std::vector<Complex>& grid);

}  // namespace stieltjes
