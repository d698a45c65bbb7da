#include "stieltjes/rs_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stieltjes/contractions.hpp"

namespace stieltjes {

PassiveSelfadjointSystem::PassiveSelfadjointSystem(Index dim_m, const Matrix& t, double tol)
    : m_(dim_m), t_(t) {
  if (t.rows() != t.cols() || dim_m < 0 || dim_m > t.rows())
    throw Error(ErrorKind::ShapeMismatch, "system operator must be square with m <= size");
  if (!is_hermitian(t, tol)) throw Error(ErrorKind::NotHermitian, "system operator not Hermitian");
  require_contraction(t, "system operator", tol);
  t_ = hermitian_part(t);
}

PassiveSelfadjointSystem PassiveSelfadjointSystem::from_blocks(const Matrix& d, const Matrix& c,
                                                               const Matrix& f, double tol) {
  const Index m = d.rows(), k = f.rows();
  if (d.cols() != m || f.cols() != k || c.rows() != m || c.cols() != k)
    throw Error(ErrorKind::ShapeMismatch, "from_blocks: block shapes");
  Matrix t(m + k, m + k);
  t << d, c, c.adjoint(), f;
  return PassiveSelfadjointSystem(m, t, tol);
}

bool on_cut(Complex z) { return z.imag() == 0.0 && std::abs(z.real()) >= 1.0; }

Matrix transfer(const PassiveSelfadjointSystem& sys, Complex z) {
  if (on_cut(z)) throw Error(ErrorKind::BadPoint, "transfer: z on the cut");
  const Index k = sys.dim_k();
  const Matrix c = sys.C();
  if (k == 0) return sys.D();
  return sys.D() + z * c * solve_guarded(Matrix::Identity(k, k) - z * sys.F(), c.adjoint());
}

double schur_frobenius_check(const PassiveSelfadjointSystem& sys, Complex z) {
  const Index m = sys.dim_m(), n = sys.T().rows();
  const Matrix om = transfer(sys, z);
  const Matrix full = inverse_guarded(Matrix::Identity(n, n) - z * sys.T());
  const Matrix rhs = inverse_guarded(Matrix::Identity(m, m) - z * om);
  return spectral_norm(full.topLeftCorner(m, m) - rhs);
}

RSFunction::RSFunction(Index dim, Evaluator eval, std::string label)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)) {}

RSFunction RSFunction::from_system(const PassiveSelfadjointSystem& sys) {
  RSFunction f(sys.dim_m(), [sys](Complex z) { return transfer(sys, z); }, "system");
  f.system_ = sys;
  return f;
}

RSFunction RSFunction::constant(const Matrix& d) {
  return from_system(PassiveSelfadjointSystem(d.rows(), d));
}

Matrix RSFunction::operator()(Complex z) const {
  if (on_cut(z)) throw Error(ErrorKind::BadPoint, "RS function evaluated on the cut");
  return eval_(z);
}

double MembershipReport::worst() const {
  return std::min({worst_inequality, worst_kernel, worst_real});
}

std::vector<Complex> default_rs_grid() {
  std::vector<Complex> upper;
  for (double r : {0.3, 0.6, 0.9})
    for (int j = 0; j < 4; ++j) upper.push_back(std::polar(r, (2 * j + 1) * std::numbers::pi / 8));
  std::vector<Complex> grid = upper;
  for (Complex z : upper) grid.push_back(std::conj(z));
  for (int j = 0; j < 6; ++j) grid.push_back(0.9 * std::cos((2 * j + 1) * std::numbers::pi / 12));
  return grid;
}

namespace {

Matrix rs_kernel(const Matrix& oz, const Matrix& ow, Complex z, Complex w) {
  const Index n = oz.rows();
  const Complex wb = std::conj(w);
  const Complex frac = (1.0 - wb * z) / (z - wb);
  return Matrix::Identity(n, n) - ow.adjoint() * oz - frac * (oz - ow.adjoint());
}

// block (r, c) = K(z_c, z_r) so that sum (K(z_c, z_r) h_c, h_r) is the form
double block_kernel_min_eig(const std::vector<Complex>& pts, const std::vector<Matrix>& vals) {
  const Index n = vals.front().rows();
  const Index p = static_cast<Index>(pts.size());
  Matrix big(n * p, n * p);
  for (Index r = 0; r < p; ++r)
    for (Index c = 0; c < p; ++c)
      big.block(r * n, c * n, n, n) = rs_kernel(vals[c], vals[r], pts[c], pts[r]);
  return min_eig_hermitian(big);
}

}  // namespace

MembershipReport rs_membership(const RSFunction& omega, const std::vector<Complex>& grid,
                               double tol) {
  MembershipReport rep;
  rep.tol = tol;
  const Index n = omega.dim();
  const Matrix id = Matrix::Identity(n, n);
  std::vector<Complex> upper, lower;
  std::vector<Matrix> upper_vals, lower_vals;
  for (Complex z : grid) {
    const Matrix oz = omega(z);
    if (z.imag() != 0.0) {
      const Matrix lhs =
          id - oz.adjoint() * oz - (1.0 - std::norm(z)) * imaginary_part(oz) / z.imag();
      const double e = min_eig_hermitian(lhs);
      rep.entries.push_back({z, "inequality", e});
      rep.worst_inequality = std::min(rep.worst_inequality, e);
      (z.imag() > 0 ? upper : lower).push_back(z);
      (z.imag() > 0 ? upper_vals : lower_vals).push_back(oz);
    } else {
      const double herm = spectral_norm(oz - oz.adjoint());
      const double e = std::min({min_eig_hermitian(id - oz), min_eig_hermitian(id + oz), -herm});
      rep.entries.push_back({z, "real_bounds", e});
      rep.worst_real = std::min(rep.worst_real, e);
    }
  }
  // each half-plane on its own, in chunks of at most 12 points
  for (auto* side : {&upper, &lower}) {
    const auto& vals = side == &upper ? upper_vals : lower_vals;
    for (std::size_t start = 0; start < side->size(); start += 12) {
      const std::size_t stop = std::min(side->size(), start + 12);
      std::vector<Complex> pts(side->begin() + start, side->begin() + stop);
      std::vector<Matrix> vs(vals.begin() + start, vals.begin() + stop);
      const double e = block_kernel_min_eig(pts, vs);
      rep.entries.push_back({pts.front(), "kernel", e});
      rep.worst_kernel = std::min(rep.worst_kernel, e);
    }
  }
  rep.passed = rep.worst() >= -tol;
  return rep;
}

double class_angle_at(const RSFunction& omega, Complex z, double tol) {
  if (std::abs(z) >= 1.0) throw Error(ErrorKind::BadPoint, "class_angle_at: |z| >= 1");
  const double alpha = std::atan(2.0 * std::abs(z.imag()) / (1.0 - std::norm(z)));
  const Matrix oz = omega(z);
  if (!class_angle_check(oz, alpha, tol)) {
    // witness: top singular value of the failing shifted operator
    const Index n = oz.rows();
    const double s = std::sin(alpha), c = std::cos(alpha);
    double worst = 0.0;
    for (double sign : {1.0, -1.0}) {
      const Matrix shifted = s * oz + sign * Complex(0, c) * Matrix::Identity(n, n);
      worst = std::max(worst, spectral_norm(shifted) - 1.0);
    }
    throw Error(ErrorKind::MembershipViolated, "class_angle_at: Omega(z) outside C(alpha_z)",
                worst);
  }
  return alpha;
}

StructureDecomposition structure_decomposition(const RSFunction& omega,
                                               const std::vector<Complex>& samples,
                                               double cluster_tol) {
  const Index n = omega.dim();
  const Matrix d0 = hermitian_part(omega(0.0));
  Eigen::SelfAdjointEigenSolver<Matrix> es(d0);
  const RealVector& w = es.eigenvalues();
  const Matrix& u = es.eigenvectors();
  StructureDecomposition out;
  out.proj_plus = Matrix::Zero(n, n);
  out.proj_minus = Matrix::Zero(n, n);
  out.proj_defect = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix p = u.col(i) * u.col(i).adjoint();
    if (std::abs(w(i) - 1.0) < cluster_tol)
      out.proj_plus += p;
    else if (std::abs(w(i) + 1.0) < cluster_tol)
      out.proj_minus += p;
    else
      out.proj_defect += p;
  }
  std::vector<Complex> pts = samples;
  if (pts.empty())
    for (int j = 0; j < 10; ++j) pts.push_back(std::polar(0.2 + 0.07 * j, 0.3 + 0.55 * j));
  for (Complex z : pts) {
    const Matrix oz = omega(z);
    out.invariance_residual = std::max(
        {out.invariance_residual, spectral_norm(oz * out.proj_plus - out.proj_plus),
         spectral_norm(oz * out.proj_minus + out.proj_minus),
         spectral_norm(out.proj_plus * oz - oz * out.proj_plus)});
  }
  return out;
}

double Omega0Result::worst() const {
  return std::max({res_negated_inverse, res_midpoint_inverse, res_fraction_plus, res_fraction_minus});
}

namespace {

void require_coupling(const Matrix& n, const Matrix& fp, const Matrix& fpp, double tol) {
  const Index k = n.rows();
  if (fp.rows() != k || fp.cols() != k || fpp.rows() != k || fpp.cols() != k)
    throw Error(ErrorKind::ShapeMismatch, "omega0: F', F'' must act on the state space");
  const double res = spectral_norm(fp - fpp - 2.0 * n * n.adjoint());
  if (res > tol) throw Error(ErrorKind::CouplingMismatch, "omega0: F' - F'' != 2NN^*", res);
}

}  // namespace

Omega0Result omega0(const Matrix& n, const Matrix& fp, const Matrix& fpp, Complex z,
                    double tol) {
  if (on_cut(z)) throw Error(ErrorKind::BadPoint, "omega0: z on the cut");
  require_coupling(n, fp, fpp, tol);
  const Index m = n.cols(), k = n.rows();
  const Matrix im = Matrix::Identity(m, m), ik = Matrix::Identity(k, k);
  const Matrix ns = n.adjoint();
  const Matrix mid = 0.5 * (fp + fpp);
  Omega0Result out;
  out.value = z * ns * solve_guarded(ik - z * mid, n);
  const Matrix plus = im + 2.0 * z * ns * solve_guarded(ik - z * fp, n);
  const Matrix minus = -im + 2.0 * z * ns * solve_guarded(ik - z * fpp, n);
  const Matrix half_plus = im + z * ns * solve_guarded(ik - z * fp, n);
  // -(plus)^{-1} = minus  <=>  plus * minus = -I
  out.res_negated_inverse = spectral_norm(plus * minus + im);
  out.res_midpoint_inverse = spectral_norm((im - out.value) * half_plus - im);
  out.res_fraction_plus = spectral_norm((im + out.value) - plus * (im - out.value));
  out.res_fraction_minus = spectral_norm((out.value - im) - minus * (im + out.value));
  if (out.worst() > tol)
    throw Error(ErrorKind::IdentityResidualExceeded, "omega0: identity residual", out.worst());
  return out;
}

PassiveSelfadjointSystem omega0_system(const Matrix& n, const Matrix& fp, const Matrix& fpp,
                                       double tol) {
  require_coupling(n, fp, fpp, tol);
  const Index m = n.cols();
  return PassiveSelfadjointSystem::from_blocks(Matrix::Zero(m, m), n.adjoint(),
                                               0.5 * (fp + fpp), 1e-9);
}

bool minimality_check(const PassiveSelfadjointSystem& sys, double tol) {
  const Index k = sys.dim_k();
  if (k == 0) return true;
  const Matrix cs = sys.C().adjoint();
  const Matrix f = sys.F();
  const Index m = sys.dim_m();
  Matrix krylov(k, m * k);
  Matrix block = cs;
  for (Index j = 0; j < k; ++j) {
    krylov.middleCols(j * m, m) = block;
    block = f * block;
  }
  return orthonormal_column_basis(krylov, tol).dim() == k;
}

}  // namespace stieltjes
