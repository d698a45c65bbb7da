#include "stieltjes/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stieltjes/contractions.hpp"

namespace stieltjes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix eye(Index n) { return Matrix::Identity(n, n); }

void require_off_axis(Complex lambda, const char* what) {
  if (on_positive_axis(lambda))
    throw Error(ErrorKind::BadPoint, std::string(what) + ": lambda on [0, inf)");
}

}  // namespace

const char* to_string(FamilyKind kind) {
  return kind == FamilyKind::Stieltjes ? "stieltjes" : "inverse_stieltjes";
}

FamilyKind parse_family_kind(const std::string& s) {
  if (s == "stieltjes") return FamilyKind::Stieltjes;
  if (s == "inverse_stieltjes") return FamilyKind::InverseStieltjes;
  throw Error(ErrorKind::ParseError, "unknown family kind '" + s + "'");
}

StieltjesConstruction StieltjesConstruction::make(const LinearRelation& a_hat, const Matrix& v,
                                                  const Matrix& z) {
  return make(a_hat, v, z, Subspace::full(v.cols()));
}

StieltjesConstruction StieltjesConstruction::make(const LinearRelation& a_hat, const Matrix& v,
                                                  const Matrix& z, const Subspace& dom_z) {
  StieltjesConstruction c{a_hat, v, z, dom_z};
  c.validate();
  return c;
}

bool StieltjesConstruction::z_identity() const {
  return z_bounded() && (Z - eye(dim_m())).norm() == 0.0;
}

void StieltjesConstruction::validate(double tol) const {
  if (A_hat.space_dim() != dim_k())
    throw Error(ErrorKind::ShapeMismatch, "construction: A_hat must act on the range of V");
  if (Z.rows() != dim_m() || Z.cols() != dim_m() || dom_Z.ambient_dim != dim_m())
    throw Error(ErrorKind::ShapeMismatch, "construction: Z must act on M");
  if (!is_nonnegative(A_hat, tol))
    throw Error(ErrorKind::NotNonnegativeSelfadjoint, "construction: A_hat");
  require_contraction(V, "construction(V)", tol);
}

LinearRelation Family::operator()(Complex lambda) const {
  require_off_axis(lambda, "family evaluation");
  return relation(lambda);
}

bool on_positive_axis(Complex lambda) { return lambda.imag() == 0.0 && lambda.real() >= 0.0; }

Complex disk_point(Complex lambda) { return (1.0 + lambda) / (1.0 - lambda); }

Complex plane_point(Complex z) { return (z - 1.0) / (z + 1.0); }

LinearRelation from_rs(const RSFunction& omega, FamilyKind kind, Complex lambda) {
  require_off_axis(lambda, "from_rs");
  const Matrix o = omega(disk_point(lambda));
  const Matrix id = eye(o.rows());
  if (kind == FamilyKind::Stieltjes) return LinearRelation::from_pairs(id - o, id + o);
  return LinearRelation::from_pairs(id + o, o - id);
}

Matrix to_rs(const Family& family, Complex z) {
  if (on_cut(z) || z == Complex(-1.0, 0.0))
    throw Error(ErrorKind::BadPoint, "to_rs: z on the cut");
  const LinearRelation q = family(plane_point(z));
  // {f, f'} -> {f + f', f' - f} (Stieltjes) or {f - f', f + f'} (inverse)
  const LinearRelation g = family.kind == FamilyKind::Stieltjes ? apply_block(q, 1, 1, -1, 1)
                                                                : apply_block(q, 1, -1, 1, 1);
  return to_operator(g, 1e-9);
}

namespace {

// basis of ran(I - Omega(0)) (Stieltjes) or ran(I + Omega(0)) (inverse)
Subspace rs_form_basis(const RSFunction& omega, FamilyKind kind) {
  const Matrix d0 = hermitian_part(omega(0.0));
  const Index n = d0.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(d0);
  const double target = kind == FamilyKind::Stieltjes ? 1.0 : -1.0;
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i)
    if (std::abs(es.eigenvalues()(i) - target) >= 1e-8) keep.push_back(i);
  Matrix b(n, static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) b.col(j) = es.eigenvectors().col(keep[j]);
  return Subspace(n, b);
}

}  // namespace

Family family_from_rs(const RSFunction& omega, FamilyKind kind) {
  Family f;
  f.kind = kind;
  f.dim = omega.dim();
  f.label = "rs:" + omega.label();
  f.omega = omega;
  f.relation = [omega, kind](Complex l) { return from_rs(omega, kind, l); };
  f.form_basis = rs_form_basis(omega, kind);
  const Matrix qc = f.form_basis.basis;
  f.form = [omega, kind, qc](Complex l) -> Matrix {
    require_off_axis(l, "form");
    const Matrix o = omega(disk_point(l));
    const Matrix id = eye(o.rows());
    const Matrix q_adj = qc.adjoint();
    if (qc.cols() == 0) return Matrix(0, 0);
    if (kind == FamilyKind::Stieltjes) {
      const Matrix m = q_adj * (id - o) * qc;
      const Matrix num = q_adj * (id + o) * qc;
      return solve_guarded(m.transpose(), num.transpose()).transpose();
    }
    const Matrix m = q_adj * (id + o) * qc;
    const Matrix num = q_adj * (o - id) * qc;
    return solve_guarded(m.transpose(), num.transpose()).transpose();
  };
  return f;
}

Matrix q0(const StieltjesConstruction& cons, Complex lambda) {
  const Index m = cons.dim_m();
  if (lambda == Complex(-1.0, 0.0)) return eye(m);
  require_off_axis(lambda, "q0");
  const Matrix& v = cons.V;
  return eye(m) + (1.0 + lambda) * v.adjoint() * resolvent(cons.A_hat, lambda) * v;
}

Matrix r0(const StieltjesConstruction& cons, Complex lambda) {
  const Index m = cons.dim_m();
  if (lambda == Complex(-1.0, 0.0)) return -eye(m);
  require_off_axis(lambda, "r0");
  const Matrix& v = cons.V;
  // (lambda A - I)^{-1} as the resolvent of lambda A at 1
  const Matrix res = resolvent(scale(cons.A_hat, lambda), 1.0);
  return -eye(m) - (1.0 + lambda) * v.adjoint() * res * v;
}

CheckedValue neg_inv_q0(const StieltjesConstruction& cons, Complex lambda, double tol) {
  const Index m = cons.dim_m();
  const Matrix& v = cons.V;
  CheckedValue out;
  if (lambda == Complex(-1.0, 0.0)) {
    out.value = -eye(m);
  } else {
    require_off_axis(lambda, "neg_inv_q0");
    const LinearRelation shifted = add_operator(cons.A_hat, (1.0 + lambda) * v * v.adjoint());
    out.value = -eye(m) + (1.0 + lambda) * v.adjoint() * resolvent(shifted, lambda) * v;
  }
  // -Q^{-1} = value  <=>  value * Q = -I
  out.residual = spectral_norm(out.value * q0(cons, lambda) + eye(m));
  if (out.residual > tol)
    throw Error(ErrorKind::IdentityResidualExceeded, "neg_inv_q0: closed form != -Q0^{-1}",
                out.residual);
  return out;
}

OperatorPartForms q0_operator_part_form(const StieltjesConstruction& cons, Complex lambda,
                                        double tol) {
  require_off_axis(lambda, "q0_operator_part_form");
  const OperatorPartDecomposition opd = operator_part(cons.A_hat);
  const Index m = cons.dim_m(), k = cons.dim_k();
  const Matrix& v = cons.V;
  const Matrix& qc = opd.complement.basis;  // K minus mul A_hat
  const Index d = qc.cols();
  const Matrix a_o = hermitian_part(opd.local);
  const Matrix p_o = qc * qc.adjoint();
  const Matrix p_perp = opd.mul.projector();
  const Matrix p_zero = orthonormal_column_basis(qc * a_o).projector();

  OperatorPartForms out;
  Matrix inner_q = Matrix::Zero(k, k);
  Matrix inner_r = Matrix::Zero(k, k);
  if (d > 0) {
    const Matrix res = inverse_guarded(a_o - lambda * eye(d));
    const Matrix plus = eye(d) + a_o;
    inner_q = qc * plus * res * qc.adjoint();
    inner_r = qc * a_o * plus * (res - inverse_guarded(plus)) * qc.adjoint() * p_zero;
  }
  out.q_value = eye(m) - v.adjoint() * p_o * v + v.adjoint() * inner_q * v;
  out.r_value = -eye(m) + (1.0 + lambda) * v.adjoint() * p_perp * v + v.adjoint() * inner_r * v;

  out.q_residual = spectral_norm(out.q_value - q0(cons, lambda));
  StieltjesConstruction inv = cons;
  inv.A_hat = inverse(cons.A_hat);
  out.r_residual = spectral_norm(out.r_value - r0(inv, lambda));
  const double worst = std::max(out.q_residual, out.r_residual);
  if (worst > tol)
    throw Error(ErrorKind::IdentityResidualExceeded,
                "q0_operator_part_form: expansion differs from the resolvent form", worst);
  return out;
}

PassiveSelfadjointSystem system_from_construction(const StieltjesConstruction& cons,
                                                  FamilyKind kind) {
  const Index k = cons.dim_k(), m = cons.dim_m();
  const Matrix f = hermitian_part(to_operator(cayley(cons.A_hat)));
  const Matrix n = std::sqrt(0.5) * sqrt_psd(eye(k) + f, 1e-9) * cons.V;
  Matrix mid = f - n * n.adjoint();
  // R0(l) = -Q0(1/l) comes from Omega(z) = -Omega_0(-z)
  if (kind == FamilyKind::InverseStieltjes) mid = -mid;
  return PassiveSelfadjointSystem::from_blocks(Matrix::Zero(m, m), n.adjoint(), mid, 1e-9);
}

FormFamilyValue form_family(const StieltjesConstruction& cons, FamilyKind kind, Complex lambda) {
  require_off_axis(lambda, "form_family");
  const Matrix x = kind == FamilyKind::Stieltjes ? q0(cons, lambda) : r0(cons, lambda);
  FormFamilyValue out;
  out.basis = cons.dom_Z;
  const Matrix w = cons.Z * cons.dom_Z.basis;
  out.form = w.adjoint() * x * w;
  if (cons.z_bounded()) {
    out.relation = LinearRelation::from_operator(cons.Z.adjoint() * x * cons.Z);
  } else {
    // Z^* X Z with Z defined on dom_Z only
    const LinearRelation z_graph = LinearRelation::from_pairs(cons.dom_Z.basis, w);
    out.relation = compose(adjoint(z_graph), compose(LinearRelation::from_operator(x), z_graph));
  }
  return out;
}

Family family_from_construction(const StieltjesConstruction& cons, FamilyKind kind) {
  Family f;
  f.kind = kind;
  f.dim = cons.dim_m();
  f.label = "construction";
  f.construction = cons;
  f.relation = [cons, kind](Complex l) { return form_family(cons, kind, l).relation; };
  f.form_basis = cons.dom_Z;
  f.form = [cons, kind](Complex l) { return form_family(cons, kind, l).form; };
  if (cons.z_bounded()) {
    f.value = [cons, kind](Complex l) -> Matrix {
      const Matrix x = kind == FamilyKind::Stieltjes ? q0(cons, l) : r0(cons, l);
      return cons.Z.adjoint() * x * cons.Z;
    };
  }
  if (cons.z_identity()) f.omega = RSFunction::from_system(system_from_construction(cons, kind));
  return f;
}

Family family_from_values(FamilyKind kind, Index dim, Family::MatrixEval values,
                          std::string label) {
  Family f;
  f.kind = kind;
  f.dim = dim;
  f.label = std::move(label);
  f.value = values;
  f.relation = [values](Complex l) { return LinearRelation::from_operator(values(l)); };
  f.form_basis = Subspace::full(dim);
  f.form = values;
  return f;
}

Family family_neg_h_over_lambda(const Matrix& h) {
  const Index n = h.rows();
  if (!is_hermitian(h) || min_eig_hermitian(h) < -1e-12)
    throw Error(ErrorKind::NotPSD, "family_neg_h_over_lambda: H must be Hermitian PSD");
  const Matrix hh = hermitian_part(h);
  Family f = family_from_values(
      FamilyKind::Stieltjes, n,
      [hh](Complex l) -> Matrix {
        if (l == Complex(0.0, 0.0)) throw Error(ErrorKind::BadPoint, "-H/lambda at 0");
        return -hh / l;
      },
      "neg_h_over_lambda");
  // per eigenvalue t: [[-s, c], [c, s]] with s = (1-t)/(1+t), c = sqrt(1-s^2)
  Eigen::SelfAdjointEigenSolver<Matrix> es(hh);
  const Matrix& u = es.eigenvectors();
  RealVector s(n), c(n);
  for (Index i = 0; i < n; ++i) {
    const double t = std::max(0.0, es.eigenvalues()(i));
    s(i) = (1.0 - t) / (1.0 + t);
    c(i) = std::sqrt(std::max(0.0, 1.0 - s(i) * s(i)));
  }
  const Matrix ds = u * s.cast<Complex>().asDiagonal() * u.adjoint();
  const Matrix dc = u * c.cast<Complex>().asDiagonal() * u.adjoint();
  f.omega = RSFunction::from_system(PassiveSelfadjointSystem::from_blocks(-ds, dc, ds, 1e-9));
  return f;
}

RSFunction omega_of(const Family& family) {
  if (family.omega) return *family.omega;
  return RSFunction(family.dim, [family](Complex z) { return to_rs(family, z); },
                    "graph_transform");
}

// ---------------------------------------------------------------- sectors

std::pair<double, double> sector_rotation(FamilyKind kind, Complex lambda) {
  const double a = std::abs(std::arg(lambda));
  if (lambda.real() <= 0.0)
    return {kind == FamilyKind::Stieltjes ? 0.0 : kPi, kPi - a};
  const double semi = (kPi - a) / 2;
  const double mag = kind == FamilyKind::Stieltjes ? (kPi - a) / 2 : (kPi + a) / 2;
  return {lambda.imag() > 0 ? -mag : mag, semi};
}

namespace {

struct ValueChecks {
  double violation = 0.0;
  double nevanlinna = 0.0;
  double angle_excess = 0.0;
};

ValueChecks check_values(FamilyKind kind, Complex lambda, const std::vector<Complex>& values) {
  ValueChecks out;
  const auto [phi, semi] = sector_rotation(kind, lambda);
  const Complex rot = std::polar(1.0, phi);
  double vmax = 0.0;
  for (Complex v : values) vmax = std::max(vmax, std::abs(v));
  const double tiny = 1e-9 * std::max(1.0, vmax);
  const double sign = kind == FamilyKind::Stieltjes ? 1.0 : -1.0;
  for (Complex v : values) {
    const double scale = std::max(1.0, std::abs(v));
    if (lambda.imag() == 0.0) {
      const double e = std::min(sign * v.real(), -std::abs(v.imag())) / scale;
      out.violation = std::min(out.violation, e);
    } else {
      const double ratio = lambda.real() / std::abs(lambda.imag());
      const double s = std::max(1.0, std::abs(v) * (1.0 + std::abs(ratio)));
      out.violation =
          std::min(out.violation, (sign * v.real() + ratio * std::abs(v.imag())) / s);
      const double ny = v.imag() / lambda.imag() / std::max(1.0, std::abs(v) / std::abs(lambda.imag()));
      const Complex t = kind == FamilyKind::Stieltjes ? lambda * v : v / lambda;
      const double nt =
          t.imag() / lambda.imag() / std::max(1.0, std::abs(t) / std::abs(lambda.imag()));
      out.nevanlinna = std::min({out.nevanlinna, ny, nt});
    }
    const Complex w = rot * v;
    if (std::abs(w) > tiny) out.angle_excess = std::max(out.angle_excess, std::abs(std::arg(w)) - semi);
  }
  return out;
}

}  // namespace

SectorReport sector_check(const Family& family, Complex lambda, std::size_t samples,
                          std::uint64_t seed, double tol) {
  SectorReport rep;
  rep.lambda = lambda;
  rep.tol = tol;
  std::tie(rep.phi, rep.semi_angle) = sector_rotation(family.kind, lambda);
  try {
    rep.samples = numerical_range(family(lambda), samples, seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyDomain) throw;
    return rep;  // nothing to check on a trivial domain
  }
  const ValueChecks c = check_values(family.kind, lambda, rep.samples.values);
  rep.worst_violation = c.violation;
  rep.worst_nevanlinna = c.nevanlinna;
  rep.worst_angle_excess = c.angle_excess;
  rep.passed = c.violation >= -tol && c.nevanlinna >= -tol && c.angle_excess <= 1e-8;
  return rep;
}

// ---------------------------------------------------------- closed forms

Complex ClosedFormRepresentation::evaluate(const Vector& u, const Vector& v) const {
  const double scale = std::max({1.0, u.norm(), v.norm()});
  if (domain.residual(u) > 1e-8 * scale || domain.residual(v) > 1e-8 * scale)
    throw Error(ErrorKind::OutsideDomain, "closed form evaluated outside its domain");
  const Vector a = domain.basis.adjoint() * u;
  const Vector b = domain.basis.adjoint() * v;
  return b.dot(form_local * a);
}

ClosedFormRepresentation closed_form_from_cayley(const LinearRelation& a, double phi) {
  const Index n = a.space_dim();
  const LinearRelation rotated = scale(a, std::polar(1.0, phi));
  Matrix t;
  try {
    t = to_operator(cayley(rotated), 1e-10);
  } catch (const Error&) {
    throw Error(ErrorKind::NotSectorial, "closed_form_from_cayley: Cayley transform not an operator");
  }
  ClosedFormRepresentation out;
  out.phi = phi;
  try {
    out.alpha = min_class_angle(t, 1e-9);
  } catch (const Error&) {
    throw Error(ErrorKind::NotSectorial, "closed_form_from_cayley: Cayley transform not a contraction");
  }
  if (!std::isfinite(out.alpha))
    throw Error(ErrorKind::NotSectorial, "closed_form_from_cayley: no sector below pi/2");
  const Matrix t_r = hermitian_part(t);
  const Matrix t_i = imaginary_part(t);
  const Matrix s = sqrt_psd(eye(n) + t_r, 1e-9);
  out.domain = orthonormal_column_basis(s, 1e-9);
  const Matrix& u = out.domain.basis;
  const Index d = u.cols();
  if (d == 0) {
    out.g_local = Matrix(0, 0);
    out.form_local = Matrix(0, 0);
    return out;
  }
  const Matrix s_inv = inverse_guarded(u.adjoint() * s * u);
  out.g_local = hermitian_part(s_inv * u.adjoint() * t_i * u * s_inv);
  const Matrix core = inverse_guarded(eye(d) + Complex(0, 1) * out.g_local);
  out.form_local = std::polar(1.0, -phi) * (-eye(d) + 2.0 * s_inv * core * s_inv);
  return out;
}

// ---------------------------------------------------------------- kernels

namespace {

// Richardson-extrapolated central difference along the direction dir
Matrix central_derivative(const Family::MatrixEval& f, Complex l, Complex dir = 1.0) {
  auto diff = [&](double h) { return ((f(l + h * dir) - f(l - h * dir)) / (2.0 * h)).eval(); };
  const Matrix d1 = diff(1e-4), d2 = diff(5e-5);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

KernelReport kernel_check(const Family& family, const std::vector<Complex>& grid, double tol) {
  if (!family.form) throw Error(ErrorKind::Unsupported, "kernel_check: family has no form");
  KernelReport rep;
  rep.tol = tol;
  rep.points = grid.size();
  const Index d = family.form_basis.dim();
  const Index p = static_cast<Index>(grid.size());
  if (d == 0 || p == 0) return rep;
  std::vector<Matrix> vals;
  for (Complex l : grid) {
    require_off_axis(l, "kernel_check");
    vals.push_back(family.form(l));
  }
  const bool stieltjes = family.kind == FamilyKind::Stieltjes;
  const double sgn = stieltjes ? 1.0 : -1.0;
  std::vector<std::optional<Matrix>> derivs(grid.size());
  // one block matrix per half-plane; real points go with the upper one
  std::vector<Index> halves[2];
  for (Index i = 0; i < p; ++i) halves[grid[i].imag() < 0.0 ? 1 : 0].push_back(i);
  rep.extreme_eig = stieltjes ? kInf : -kInf;
  for (const auto& idx : halves) {
    const Index q = static_cast<Index>(idx.size());
    if (q == 0) continue;
    Matrix big(d * q, d * q);
    for (Index r = 0; r < q; ++r) {
      for (Index c = 0; c < q; ++c) {
        const Index ir = idx[r], ic = idx[c];
        const Complex l = grid[ic], mb = std::conj(grid[ir]);
        const double gap = std::abs(l - mb);
        Matrix blk;
        if (gap < 1e-8) {
          if (!derivs[ic]) derivs[ic] = central_derivative(family.form, l);
          blk = 2.0 * vals[ic] + sgn * 2.0 * l * *derivs[ic];
          ++rep.diagonal_blocks;
        } else if (gap < 1e-4) {
          throw Error(ErrorKind::GridDegenerate, "kernel_check: near-conjugate grid points", gap);
        } else {
          // Q(mu-bar) = Q(mu)^H
          const Matrix qm = vals[ir].adjoint();
          blk = vals[ic] + qm + sgn * ((l + mb) / (l - mb)) * (vals[ic] - qm);
        }
        big.block(r * d, c * d, d, d) = blk;
      }
    }
    if (stieltjes)
      rep.extreme_eig = std::min(rep.extreme_eig, min_eig_hermitian(big));
    else
      rep.extreme_eig = std::max(rep.extreme_eig, max_eig_hermitian(big));
  }
  rep.passed = stieltjes ? rep.extreme_eig >= -tol : rep.extreme_eig <= tol;
  return rep;
}

LowerBound lower_bound_constant(const Family& family, Complex lambda, double tol) {
  if (!family.form) throw Error(ErrorKind::Unsupported, "lower_bound_constant: family has no form");
  require_off_axis(lambda, "lower_bound_constant");
  const Matrix m = family.form(lambda);
  LowerBound out;
  out.phi = sector_rotation(family.kind, lambda).first;
  if (m.rows() == 0) {
    out.c = out.c_rotated = kInf;
    return out;
  }
  auto support = [&](double th) { return min_eig_hermitian(hermitian_part(std::polar(1.0, th) * m)); };
  // distance from 0 to the numerical range = max over directions
  const int steps = 720;
  double best = -kInf, best_th = 0.0;
  for (int j = 0; j < steps; ++j) {
    const double th = 2 * kPi * j / steps;
    const double v = support(th);
    if (v > best) best = v, best_th = th;
  }
  double lo = best_th - 2 * kPi / steps, hi = best_th + 2 * kPi / steps;
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (support(m1) < support(m2))
      lo = m1;
    else
      hi = m2;
  }
  out.c = std::max(best, support(0.5 * (lo + hi)));
  out.c_rotated = support(out.phi);
  if (!(out.c > tol))
    throw Error(ErrorKind::BoundViolated, "lower_bound_constant: 0 in the numerical range", out.c);
  return out;
}

// ----------------------------------------------------------------- limits

Matrix omega_boundary_value(const RSFunction& omega, double sign, std::string* method) {
  if (omega.system()) {
    const PassiveSelfadjointSystem& sys = *omega.system();
    const Index k = sys.dim_k();
    const Matrix a = eye(k) - sign * sys.F();
    if (k == 0 || condition_number(a) <= 1e10) {
      if (method) *method = "direct";
      if (k == 0) return sys.D();
      return sys.D() + sign * sys.C() * solve_guarded(a, sys.C().adjoint());
    }
  }
  if (method) *method = "dyadic";
  DyadicLimit lim = dyadic_limit([&](double eps) { return omega(sign * (1.0 - eps)); }, 6, 30, 1e-9);
  if (!lim.converged)
    throw Error(ErrorKind::NoConvergence, "omega_boundary_value: no dyadic convergence",
                lim.last_change);
  return lim.value;
}

Complex relation_form_value(const LinearRelation& r, const Vector& f) {
  const OperatorPartDecomposition opd = operator_part(r);
  if (opd.mul.dim() > 0 && (opd.mul.basis.adjoint() * f).norm() > 1e-8 * std::max(1.0, f.norm()))
    throw Error(ErrorKind::OutsideDomain, "relation_form_value: vector meets the multivalued part");
  return inner(opd.ambient * f, f);
}

namespace {

// Omega(+-1) is only accurate to about 1e-9 along the dyadic path; eigenvalues
// that close to +-1 are put on +-1 so that they land in ker or mul of the limit.
Matrix snap_unit_eigenvalues(const Matrix& o, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(o));
  RealVector w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i) - 1.0) < tol) w(i) = 1.0;
    if (std::abs(w(i) + 1.0) < tol) w(i) = -1.0;
  }
  return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

LinearRelation boundary_relation(const Matrix& o, FamilyKind kind) {
  const Matrix id = eye(o.rows());
  if (kind == FamilyKind::Stieltjes) return LinearRelation::from_pairs(id - o, id + o);
  return LinearRelation::from_pairs(id + o, o - id);
}

// scalar limit of the family form q(x)[g] along x = -eps (to 0) or -1/eps
double form_limit_residual(const Family& family, const Vector& g, bool to_zero, Complex target) {
  const Vector a = family.form_basis.basis.adjoint() * g;
  auto value = [&](double eps) -> Matrix {
    const double x = to_zero ? -eps : -1.0 / eps;
    Matrix out(1, 1);
    out(0, 0) = a.dot(family.form(x) * a);
    return out;
  };
  DyadicLimit lim = dyadic_limit(value, 2, 28, 1e-9 * std::max(1.0, std::abs(target)));
  if (!lim.converged)
    throw Error(ErrorKind::NoConvergence, "resolvent_limits: form values did not settle",
                lim.last_change);
  return std::abs(lim.value(0, 0) - target) / std::max(1.0, std::abs(target));
}

}  // namespace

ResolventLimits resolvent_limits(const Family& family, double tol) {
  const RSFunction omega = omega_of(family);
  ResolventLimits out;
  out.omega_plus_one = snap_unit_eigenvalues(omega_boundary_value(omega, 1.0, &out.method_plus));
  out.omega_minus_one = snap_unit_eigenvalues(omega_boundary_value(omega, -1.0, &out.method_minus));
  out.at_minus_zero = boundary_relation(out.omega_plus_one, family.kind);
  out.at_minus_infinity = boundary_relation(out.omega_minus_one, family.kind);
  const bool stieltjes = family.kind == FamilyKind::Stieltjes;
  for (const LinearRelation* r : {&out.at_minus_zero, &out.at_minus_infinity}) {
    const bool ok = stieltjes ? is_nonnegative(*r, 1e-8) : is_nonpositive(*r, 1e-8);
    if (!ok) throw Error(ErrorKind::SignViolation, "resolvent_limits: limit has the wrong sign");
  }
  if (!family.form) return out;
  const Subspace& fb = family.form_basis;
  // g in D[Q(-0)] for the limit at 0, g in the family's form domain at -inf
  const Subspace at_zero = subspace_intersection(
      orthogonal_complement(parts(out.at_minus_zero).mul), fb, 1e-9);
  const Subspace at_inf = subspace_intersection(
      orthogonal_complement(parts(out.at_minus_infinity).mul), fb, 1e-9);
  for (Index j = 0; j < at_zero.dim(); ++j) {
    const Vector g = at_zero.basis.col(j);
    out.form_residual_zero = std::max(
        out.form_residual_zero,
        form_limit_residual(family, g, true, relation_form_value(out.at_minus_zero, g)));
    ++out.form_checks;
  }
  for (Index j = 0; j < at_inf.dim(); ++j) {
    const Vector g = at_inf.basis.col(j);
    out.form_residual_infinity = std::max(
        out.form_residual_infinity,
        form_limit_residual(family, g, false, relation_form_value(out.at_minus_infinity, g)));
    ++out.form_checks;
  }
  const double worst = std::max(out.form_residual_zero, out.form_residual_infinity);
  if (worst > std::max(tol, 1e-6))
    throw Error(ErrorKind::NoConvergence, "resolvent_limits: form limit mismatch", worst);
  return out;
}

namespace {

// min eig of (A+1)^{-1} - (B+1)^{-1}; >= 0 iff A <= B for nonnegative pairs
double order_slack(const LinearRelation& a, const LinearRelation& b, bool nonnegative) {
  if (!nonnegative) return order_slack(negate(b), negate(a), true);
  return min_eig_hermitian(resolvent(a, -1.0) - resolvent(b, -1.0));
}

}  // namespace

double limits_order_slack(const Family& family, const ResolventLimits& lim,
                          const std::vector<double>& xs) {
  const bool nonneg = family.kind == FamilyKind::Stieltjes;
  double worst = kInf;
  for (double x : xs) {
    const LinearRelation q = family(x);
    worst = std::min({worst, order_slack(lim.at_minus_infinity, q, nonneg),
                      order_slack(q, lim.at_minus_zero, nonneg)});
  }
  return worst;
}

// ------------------------------------------------------ monotone limits

namespace {

struct EndpointLimit {
  bool diverges = false;
  double value = 0.0;
};

EndpointLimit endpoint_limit(const std::function<Matrix(double)>& l, const Matrix& basis,
                             const Vector& f, double e, double width) {
  const Vector a = basis.adjoint() * f;
  EndpointLimit out;
  double prev = 0.0, prev_r = 0.0;
  bool have_prev = false, have_r = false;
  for (int k = 1; k <= 50; ++k) {
    const double x = e + width * std::ldexp(1.0, -k);
    const Matrix loc = basis.adjoint() * l(x) * basis;
    const double v = a.dot(loc.partialPivLu().solve(a)).real();
    if (!std::isfinite(v) || v > 1e6) {
      out.diverges = true;
      return out;
    }
    if (have_prev) {
      const double r = 2 * v - prev;
      if (have_r && std::abs(r - prev_r) < 1e-10 * std::max(1.0, std::abs(r))) {
        out.value = r;
        return out;
      }
      prev_r = r;
      have_r = true;
    }
    prev = v;
    have_prev = true;
  }
  out.value = prev_r;
  return out;
}

double inverse_form(const Matrix& l, const Vector& f) {
  const Subspace ran = orthonormal_column_basis(hermitian_part(l), 1e-9);
  if (ran.residual(f) > 1e-7 * std::max(1.0, f.norm())) return kInf;
  return f.dot(pinv(hermitian_part(l), 1e-9) * f).real();
}

}  // namespace

MonotoneLimitsReport monotone_form_limits(const std::function<Matrix(double)>& l, double a,
                                          double b, const std::vector<Vector>& tests,
                                          int direction, double tol) {
  if (!(a < b)) throw Error(ErrorKind::HypothesisViolated, "monotone_form_limits: need a < b");
  MonotoneLimitsReport rep;
  // hypotheses on interior samples
  std::vector<double> xs;
  for (int j = 1; j < 16; ++j) xs.push_back(a + (b - a) * j / 16.0);
  Subspace r0;
  Matrix prev;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const Matrix lx = hermitian_part(l(xs[j]));
    const double scale = std::max(1.0, spectral_norm(lx));
    if (min_eig_hermitian(lx) < -1e-10 * scale)
      throw Error(ErrorKind::HypothesisViolated, "monotone_form_limits: L(x) not PSD");
    const Subspace ran = orthonormal_column_basis(lx, 1e-9);
    if (j == 0) {
      r0 = ran;
    } else {
      if (!subspace_equal(ran, r0, 1e-6))
        throw Error(ErrorKind::HypothesisViolated, "monotone_form_limits: range not constant");
      if (min_eig_hermitian(direction * (lx - prev)) < -1e-10 * scale)
        throw Error(ErrorKind::HypothesisViolated, "monotone_form_limits: not monotone");
    }
    prev = lx;
  }
  for (const Vector& f : tests)
    if (r0.residual(f) > 1e-8 * std::max(1.0, f.norm()))
      throw Error(ErrorKind::HypothesisViolated, "monotone_form_limits: test vector outside R0");

  auto endpoint_value = [&](double e, double width) {
    DyadicLimit lim = dyadic_limit([&](double eps) { return l(e + width * eps); }, 1, 50, 1e-12);
    return hermitian_part(lim.value);
  };
  rep.at_a = endpoint_value(a, b - a);
  rep.at_b = endpoint_value(b, a - b);
  for (const Vector& f : tests) {
    MonotoneLimitEntry ent;
    ent.f = f;
    const EndpointLimit lo = endpoint_limit(l, r0.basis, f, a, b - a);
    const EndpointLimit hi = endpoint_limit(l, r0.basis, f, b, a - b);
    ent.lower_diverges = lo.diverges;
    ent.lower_limit = lo.diverges ? kInf : lo.value;
    ent.lower_expected = inverse_form(rep.at_a, f);
    ent.upper_diverges = hi.diverges;
    ent.upper_limit = hi.diverges ? kInf : hi.value;
    ent.upper_expected = inverse_form(rep.at_b, f);
    auto agree = [tol](double got, double want) {
      if (std::isinf(want) || std::isinf(got)) return std::isinf(want) && std::isinf(got);
      return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
    };
    ent.lower_agrees = agree(ent.lower_limit, ent.lower_expected);
    ent.upper_agrees = agree(ent.upper_limit, ent.upper_expected);
    rep.passed = rep.passed && ent.lower_agrees && ent.upper_agrees;
    rep.entries.push_back(ent);
  }
  return rep;
}

// ----------------------------------------------------- transformed families

TransformReport transform_equivalences(const Family& family, const std::vector<Complex>& samples,
                                       std::size_t count, std::uint64_t seed, double tol) {
  const bool stieltjes = family.kind == FamilyKind::Stieltjes;
  const FamilyKind other = stieltjes ? FamilyKind::InverseStieltjes : FamilyKind::Stieltjes;
  TransformReport rep;

  auto derived = [&](Family::RelationEval ev, FamilyKind kind) {
    Family g;
    g.kind = kind;
    g.dim = family.dim;
    g.relation = std::move(ev);
    return g;
  };
  const Family reciprocal =
      derived([family](Complex l) { return negate(family(1.0 / l)); }, other);
  const Family neg_inverse = derived([family](Complex l) { return negate(inverse(family(l))); }, other);
  const Family weighted = derived(
      [family, stieltjes](Complex l) { return scale(family(l), stieltjes ? l : 1.0 / l); }, other);

  auto sector_worst = [&](const Family& g) {
    double w = 0.0;
    bool ok = true;
    for (Complex l : samples) {
      const SectorReport s = sector_check(g, l, count, seed, tol);
      w = std::min({w, s.worst_violation, s.worst_nevanlinna, -s.worst_angle_excess});
      ok = ok && s.passed;
    }
    return std::make_pair(w, ok);
  };
  auto nevanlinna_worst = [&](const Family& g) {
    double w = 0.0;
    for (Complex l : samples) {
      if (l.imag() == 0.0) continue;
      NumericalRangeSample nr;
      try {
        nr = numerical_range(g(l), count, seed);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyDomain) throw;
        continue;
      }
      for (Complex v : nr.values)
        w = std::min(w, v.imag() / l.imag() / std::max(1.0, std::abs(v) / std::abs(l.imag())));
    }
    return w;
  };

  auto [w1, ok1] = sector_worst(reciprocal);
  rep.checks.push_back({"negated_reciprocal_argument", w1, ok1});
  auto [w2, ok2] = sector_worst(neg_inverse);
  rep.checks.push_back({"negated_inverse", w2, ok2});
  const double w3 = nevanlinna_worst(weighted);
  rep.checks.push_back({stieltjes ? "lambda_times_nevanlinna" : "over_lambda_nevanlinna", w3,
                        w3 >= -tol});
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.passed;
  return rep;
}

DomainConstancyReport form_domain_constancy(const Family& family,
                                            const std::vector<Complex>& grid) {
  const RSFunction omega = omega_of(family);
  const double sign = family.kind == FamilyKind::Stieltjes ? -1.0 : 1.0;
  DomainConstancyReport rep;
  std::vector<Subspace> ranges;
  for (Complex l : grid) {
    require_off_axis(l, "form_domain_constancy");
    const Matrix o = omega(disk_point(l));
    ranges.push_back(orthonormal_column_basis(eye(o.rows()) + sign * hermitian_part(o), 1e-9));
  }
  for (std::size_t i = 0; i < ranges.size(); ++i)
    for (std::size_t j = i + 1; j < ranges.size(); ++j)
      rep.worst_distance = std::max(rep.worst_distance, subspace_distance(ranges[i], ranges[j]));
  if (!ranges.empty()) rep.domain_dim = ranges.front().dim();
  if (family.form && family.form_basis.dim() > 0) {
    for (Complex l : grid) {
      const Matrix dx = central_derivative(family.form, l, 1.0);
      const Matrix dy = central_derivative(family.form, l, Complex(0, 1));
      rep.worst_cr_residual =
          std::max(rep.worst_cr_residual, (dy - Complex(0, 1) * dx).cwiseAbs().maxCoeff());
    }
  }
  rep.passed = rep.worst_distance < 1e-8 && rep.worst_cr_residual < 1e-5;
  return rep;
}

}  // namespace stieltjes
