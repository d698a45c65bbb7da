#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stieltjes/numerics.hpp"

namespace stieltjes {

// System operator T = [[D, C], [C^*, F]] on M (+) K, T Hermitian contraction.
class PassiveSelfadjointSystem {
 public:
  PassiveSelfadjointSystem() = default;
  PassiveSelfadjointSystem(Index dim_m, const Matrix& t, double tol = 1e-10);
  static PassiveSelfadjointSystem from_blocks(const Matrix& d, const Matrix& c,
                                              const Matrix& f, double tol = 1e-10);

  Index dim_m() const { return m_; }
  Index dim_k() const { return t_.rows() - m_; }
  const Matrix& T() const { return t_; }
  Matrix D() const { return t_.topLeftCorner(m_, m_); }
  Matrix C() const { return t_.topRightCorner(m_, dim_k()); }  // K -> M
  Matrix F() const { return t_.bottomRightCorner(dim_k(), dim_k()); }

 private:
  Index m_ = 0;
  Matrix t_;
};

bool on_cut(Complex z);

// Omega(z) = D + z C (I - z F)^{-1} C^*
Matrix transfer(const PassiveSelfadjointSystem& sys, Complex z);

// || P_M (I - zT)^{-1}|_M - (I - z Omega(z))^{-1} ||
double schur_frobenius_check(const PassiveSelfadjointSystem& sys, Complex z);

class RSFunction {
 public:
  using Evaluator = std::function<Matrix(Complex)>;

  RSFunction() = default;
  RSFunction(Index dim, Evaluator eval, std::string label);
  static RSFunction from_system(const PassiveSelfadjointSystem& sys);
  static RSFunction constant(const Matrix& d);

  Matrix operator()(Complex z) const;
  Index dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const std::optional<PassiveSelfadjointSystem>& system() const { return system_; }

 private:
  Index dim_ = 0;
  Evaluator eval_;
  std::string label_;
  std::optional<PassiveSelfadjointSystem> system_;
};

struct MembershipEntry {
  Complex z;
  std::string check;  // "inequality", "kernel", "real_bounds"
  double min_eig;
};

struct MembershipReport {
  std::vector<MembershipEntry> entries;
  double worst_inequality = 0.0;
  double worst_kernel = 0.0;
  double worst_real = 0.0;
  double tol = 0.0;
  bool passed = true;
  double worst() const;
};

// 12 upper half-disk points, their conjugates and 6 real points, |z| <= 0.9.
std::vector<Complex> default_rs_grid();

MembershipReport rs_membership(const RSFunction& omega, const std::vector<Complex>& grid,
                               double tol = 1e-8);

// alpha_z = arctan(2|Im z|/(1-|z|^2)); MembershipViolated unless
// Omega(z) is in C(alpha_z).
double class_angle_at(const RSFunction& omega, Complex z, double tol = 1e-9);

struct StructureDecomposition {
  Matrix proj_plus, proj_minus, proj_defect;
  double invariance_residual = 0.0;
};

StructureDecomposition structure_decomposition(const RSFunction& omega,
                                               const std::vector<Complex>& samples = {},
                                               double cluster_tol = 1e-8);

struct Omega0Result {
  Matrix value;
  double res_negated_inverse = 0.0;   // negated-inverse identity
  double res_midpoint_inverse = 0.0;  // midpoint inverse identity
  double res_fraction_plus = 0.0;
  double res_fraction_minus = 0.0;
  double worst() const;
};

// Omega_0(z) = z N^*(I - z (F'+F'')/2)^{-1} N with its four identities checked.
Omega0Result omega0(const Matrix& n, const Matrix& f_prime, const Matrix& f_doubleprime,
                    Complex z, double tol = 1e-9);
PassiveSelfadjointSystem omega0_system(const Matrix& n, const Matrix& f_prime,
                                       const Matrix& f_doubleprime, double tol = 1e-9);

bool minimality_check(const PassiveSelfadjointSystem& sys, double tol = 1e-10);

}  // namespace stieltjes
