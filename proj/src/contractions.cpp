#include "stieltjes/contractions.hpp"

#include <cmath>
#include <numbers>

namespace stieltjes {

void require_contraction(const Matrix& t, const char* what, double tol) {
  const double nrm = spectral_norm(t);
  if (nrm > 1.0 + tol)
    throw Error(ErrorKind::NotContraction, std::string(what) + ": norm exceeds 1", nrm);
}

Matrix defect(const Matrix& t, double tol) {
  require_contraction(t, "defect", tol);
  const Index n = t.cols();
  return sqrt_psd(Matrix::Identity(n, n) - t.adjoint() * t, 1e-9);
}

Matrix range_projector(const Matrix& a, double tol) {
  return orthonormal_column_basis(a, tol).projector();
}

bool class_angle_check(const Matrix& t, double alpha, double tol) {
  if (t.rows() != t.cols()) return false;
  if (alpha <= 0.0) return is_hermitian(t, tol) && spectral_norm(t) <= 1.0 + tol;
  const Index n = t.rows();
  const Matrix id = Matrix::Identity(n, n);
  const double s = std::sin(alpha), c = std::cos(alpha);
  const Complex ic(0.0, c);
  return spectral_norm(s * t + ic * id) <= 1.0 + tol &&
         spectral_norm(s * t - ic * id) <= 1.0 + tol;
}

double min_class_angle(const Matrix& t, double tol) {
  require_contraction(t, "min_class_angle", tol);
  if (class_angle_check(t, 0.0, tol)) return 0.0;
  const double top = std::numbers::pi / 2 - 1e-9;
  if (!class_angle_check(t, top, tol)) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = top;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (class_angle_check(t, mid, tol))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

BlockContraction build_block_contraction(const Matrix& d, const Matrix& n, const Matrix& g,
                                         const Matrix& l, double tol) {
  // D: M -> N (p x q); N: D_D -> K (r x q); G: L -> D_{D*} (p x s); L: r x s
  const Index p = d.rows(), q = d.cols();
  if (n.cols() != q || g.rows() != p || l.rows() != n.rows() || l.cols() != g.cols())
    throw Error(ErrorKind::ShapeMismatch, "build_block_contraction: parameter shapes");
  require_contraction(d, "build_block_contraction(D)", tol);
  require_contraction(n, "build_block_contraction(N)", tol);
  require_contraction(g, "build_block_contraction(G)", tol);
  require_contraction(l, "build_block_contraction(L)", tol);

  BlockContraction out;
  const Matrix dd = defect(d, tol);
  const Matrix dds = defect(d.adjoint(), tol);
  out.D = d;
  out.N = n * range_projector(dd);
  out.G = range_projector(dds) * g;
  const Matrix dns = defect(out.N.adjoint(), tol);
  const Matrix dg = defect(out.G, tol);
  out.L = range_projector(dns) * l * range_projector(dg);
  out.B = out.N * dd;
  out.C = dds * out.G;
  out.F = -out.N * d.adjoint() * out.G + dns * out.L * dg;
  const Index r = n.rows(), s = g.cols();
  out.T.resize(p + r, q + s);
  out.T << out.D, out.C, out.B, out.F;
  return out;
}

BlockContraction decompose_block_contraction(const Matrix& t, Index row_split,
                                             Index col_split, double tol) {
  if (row_split < 0 || row_split > t.rows() || col_split < 0 || col_split > t.cols())
    throw Error(ErrorKind::ShapeMismatch, "decompose_block_contraction: split out of range");
  require_contraction(t, "decompose_block_contraction", tol);
  const Index p = row_split, q = col_split;
  const Index r = t.rows() - p, s = t.cols() - q;
  BlockContraction out;
  out.D = t.topLeftCorner(p, q);
  out.C = t.topRightCorner(p, s);
  out.B = t.bottomLeftCorner(r, q);
  out.F = t.bottomRightCorner(r, s);
  const Matrix dd = defect(out.D, tol);
  const Matrix dds = defect(out.D.adjoint(), tol);
  out.N = out.B * pinv(dd, 1e-8);
  out.G = pinv(dds, 1e-8) * out.C;
  const Matrix dns = defect(out.N.adjoint(), 1e-8);
  const Matrix dg = defect(out.G, 1e-8);
  out.L = pinv(dns, 1e-8) * (out.F + out.N * out.D.adjoint() * out.G) * pinv(dg, 1e-8);
  out.T = t;
  return out;
}

BlockContraction decompose_block_contraction(const Matrix& t, Index split, double tol) {
  return decompose_block_contraction(t, split, split, tol);
}

SelfadjointBlockSystem selfadjoint_block(const Matrix& d, const Matrix& n, const Matrix& x,
                                         double tol) {
  const Index m = d.rows(), k = n.rows();
  if (d.cols() != m || n.cols() != m || x.rows() != k || x.cols() != k)
    throw Error(ErrorKind::ShapeMismatch, "selfadjoint_block: parameter shapes");
  if (!is_hermitian(d, tol)) throw Error(ErrorKind::NotHermitian, "selfadjoint_block: D");
  if (!is_hermitian(x, tol)) throw Error(ErrorKind::NotHermitian, "selfadjoint_block: X");
  require_contraction(d, "selfadjoint_block(D)", tol);
  require_contraction(n, "selfadjoint_block(N)", tol);
  require_contraction(x, "selfadjoint_block(X)", tol);

  SelfadjointBlockSystem out;
  out.D = hermitian_part(d);
  out.X = hermitian_part(x);
  const Matrix dd = defect(out.D, tol);
  out.N = n * range_projector(dd);
  const Matrix dns = defect(out.N.adjoint(), tol);
  const Matrix cs = out.N * dd;  // C^*
  const Matrix im = Matrix::Identity(m, m);
  out.F = hermitian_part(-out.N * out.D * out.N.adjoint() + dns * out.X * dns);
  out.F_prime = hermitian_part(out.F + out.N * (im + out.D) * out.N.adjoint());
  out.F_doubleprime = hermitian_part(out.F - out.N * (im - out.D) * out.N.adjoint());
  out.T.resize(m + k, m + k);
  out.T << out.D, cs.adjoint(), cs, out.F;
  out.T = hermitian_part(out.T);
  return out;
}

namespace {

void require_off_cut(Complex z, const char* what) {
  if (z.imag() == 0.0 && std::abs(z.real()) >= 1.0)
    throw Error(ErrorKind::BadPoint, std::string(what) + ": z on (-inf,-1] or [1,inf)");
}

double product_residual(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  return spectral_norm(a * b - Matrix::Identity(n, n));
}

}  // namespace

SigmaPair sigma_pm(const SelfadjointBlockSystem& sys, Complex z, double tol) {
  require_off_cut(z, "sigma_pm");
  const Index m = sys.dim_m(), k = sys.dim_k();
  const Matrix im = Matrix::Identity(m, m), ik = Matrix::Identity(k, k);
  const Matrix p = range_projector(defect(sys.D));
  const Matrix sp = sqrt_psd(im + sys.D, 1e-9);
  const Matrix sm = sqrt_psd(im - sys.D, 1e-9);
  const Matrix ns = sys.N.adjoint();
  const Matrix rf = inverse_guarded(ik - z * sys.F);
  const Matrix rfp = inverse_guarded(ik - z * sys.F_prime);
  const Matrix rfpp = inverse_guarded(ik - z * sys.F_doubleprime);

  SigmaPair out;
  out.plus = z * sp * ns * rf * sys.N * p * sp;
  out.minus = z * sm * ns * rf * sys.N * p * sm;
  const Matrix inv_plus = im + z * sp * ns * rfp * sys.N * p * sp;
  const Matrix inv_minus = im - z * sm * ns * rfpp * sys.N * p * sm;
  out.residual_plus = product_residual(im - out.plus, inv_plus);
  out.residual_minus = product_residual(im + out.minus, inv_minus);
  const double worst = std::max(out.residual_plus, out.residual_minus);
  if (worst > tol)
    throw Error(ErrorKind::IdentityResidualExceeded, "sigma_pm: inverse identity", worst);
  return out;
}

WFunction w_function(const SelfadjointBlockSystem& sys, Complex z, double tol) {
  require_off_cut(z, "w_function");
  const Index m = sys.dim_m(), k = sys.dim_k();
  const Matrix im = Matrix::Identity(m, m), ik = Matrix::Identity(k, k);
  const Matrix ns = sys.N.adjoint();
  const Matrix mid = 0.5 * (sys.F_prime + sys.F_doubleprime);
  WFunction out;
  out.value = im + z * sys.D * ns * inverse_guarded(ik - z * mid) * sys.N;
  const Matrix w_inv = im - z * sys.D * ns * inverse_guarded(ik - z * sys.F) * sys.N;
  out.residual = product_residual(out.value, w_inv);
  if (out.residual > tol)
    throw Error(ErrorKind::IdentityResidualExceeded, "w_function: product identity",
                out.residual);
  return out;
}

BoundaryLimits boundary_limits(const SelfadjointBlockSystem& sys) {
  const Index m = sys.dim_m();
  const Matrix im = Matrix::Identity(m, m);
  const Matrix c = sys.C();
  const Matrix cs = c.adjoint();
  auto b_at = [&](double x) -> Matrix {
    return sys.F + x * cs * solve_guarded(im - x * sys.D, c, 1e16);
  };
  BoundaryLimits out;
  for (int sign : {1, -1}) {
    DyadicLimit lim = dyadic_limit(
        [&](double eps) { return b_at(sign * (1.0 - eps)); }, 6, 30, 1e-11);
    if (!lim.converged)
      throw Error(ErrorKind::NoConvergence, "boundary_limits: dyadic sequence did not settle",
                  lim.last_change);
    const Matrix& target = sign > 0 ? sys.F_prime : sys.F_doubleprime;
    const double err = spectral_norm(lim.value - target);
    if (sign > 0) {
      out.at_plus_one = lim.value;
      out.change_plus = lim.last_change;
      out.steps_plus = lim.steps;
      out.error_plus = err;
    } else {
      out.at_minus_one = lim.value;
      out.change_minus = lim.last_change;
      out.steps_minus = lim.steps;
      out.error_minus = err;
    }
    if (err > 1e-6)
      throw Error(ErrorKind::IdentityResidualExceeded,
                  sign > 0 ? "boundary_limits: B(1) != F'" : "boundary_limits: B(-1) != F''",
                  err);
  }
  return out;
}

}  // namespace stieltjes
