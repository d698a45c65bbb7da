#include "stieltjes/integral_rep.hpp"

#include <algorithm>
#include <cmath>

namespace stieltjes {

namespace {

void require_bounded(const StieltjesConstruction& cons, const char* what) {
  if (!cons.z_bounded())
    throw Error(ErrorKind::Unsupported, std::string(what) + ": needs a bounded Z");
}

void require_sign(const Matrix& h, double sign, double tol, const char* what) {
  const double scale = std::max(1.0, spectral_norm(h));
  const double e = sign > 0 ? min_eig_hermitian(h) : -max_eig_hermitian(h);
  if (h.rows() > 0 && e < -tol * scale) throw Error(ErrorKind::SignViolation, what, e);
}

}  // namespace

SpectralMeasure spectral_measure(const LinearRelation& a_hat, double cluster_tol) {
  if (!is_nonnegative(a_hat))
    throw Error(ErrorKind::NotNonnegativeSelfadjoint, "spectral_measure: A_hat");
  const OperatorPartDecomposition opd = operator_part(a_hat);
  const Index n = a_hat.space_dim();
  const Matrix& qc = opd.complement.basis;
  SpectralMeasure out;
  out.P_o = qc * qc.adjoint();
  out.P_perp = opd.mul.projector();
  out.P_zero = Matrix::Zero(n, n);
  if (qc.cols() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(opd.local));
  const RealVector& w = es.eigenvalues();  // ascending
  const Matrix& u = es.eigenvectors();
  Index start = 0;
  while (start < w.size()) {
    Index stop = start + 1;
    while (stop < w.size() && w(stop) - w(stop - 1) <= cluster_tol) ++stop;
    const Matrix cols = qc * u.middleCols(start, stop - start);
    double t = w.segment(start, stop - start).mean();
    if (std::abs(t) <= cluster_tol) t = 0.0;
    out.nodes.push_back(std::max(0.0, t));
    out.projectors.push_back(cols * cols.adjoint());
    if (t > 0.0) out.P_zero += out.projectors.back();
    start = stop;
  }
  return out;
}

IntegralRepresentation stieltjes_rep(const StieltjesConstruction& cons, double tol) {
  require_bounded(cons, "stieltjes_rep");
  const SpectralMeasure sm = spectral_measure(cons.A_hat);
  const Matrix vz = cons.V * cons.Z;
  IntegralRepresentation rep;
  rep.kind = FamilyKind::Stieltjes;
  rep.Gamma = hermitian_part(cons.Z.adjoint() * cons.Z - vz.adjoint() * sm.P_o * vz);
  require_sign(rep.Gamma, 1.0, tol, "stieltjes_rep: Gamma not PSD");
  Matrix moment = Matrix::Zero(cons.dim_m(), cons.dim_m());
  for (std::size_t i = 0; i < sm.nodes.size(); ++i) {
    const double t = sm.nodes[i];
    const Matrix w = hermitian_part((1.0 + t) * vz.adjoint() * sm.projectors[i] * vz);
    require_sign(w, 1.0, tol, "stieltjes_rep: atom weight not PSD");
    moment += w / (1.0 + t);
    rep.atoms.push_back({t, w});
  }
  const Matrix expected = vz.adjoint() * sm.P_o * vz;  // ||P_o V Z f||^2 on the diagonal
  for (Index j = 0; j < moment.rows(); ++j)
    rep.moment_residual = std::max(rep.moment_residual, std::abs(moment(j, j) - expected(j, j)));
  return rep;
}

IntegralRepresentation inverse_stieltjes_rep(const StieltjesConstruction& cons, double tol) {
  require_bounded(cons, "inverse_stieltjes_rep");
  const SpectralMeasure sm = spectral_measure(cons.A_hat);
  const Matrix vy = cons.V * cons.Z;
  IntegralRepresentation rep;
  rep.kind = FamilyKind::InverseStieltjes;
  rep.Gamma = hermitian_part(-cons.Z.adjoint() * cons.Z +
                             vy.adjoint() * (sm.P_perp + sm.P_zero) * vy);
  require_sign(rep.Gamma, -1.0, tol, "inverse_stieltjes_rep: Gamma not NSD");
  rep.Pi = hermitian_part(vy.adjoint() * sm.P_perp * vy);
  require_sign(*rep.Pi, 1.0, tol, "inverse_stieltjes_rep: Pi not PSD");
  Matrix moment = Matrix::Zero(cons.dim_m(), cons.dim_m());
  for (std::size_t i = 0; i < sm.nodes.size(); ++i) {
    const double t = sm.nodes[i];
    if (t <= 0.0) continue;  // kernel of the operator part carries no weight
    const Matrix w = hermitian_part(t * (1.0 + t) * vy.adjoint() * sm.projectors[i] * vy);
    require_sign(w, 1.0, tol, "inverse_stieltjes_rep: atom weight not PSD");
    moment += w / (t * (1.0 + t));
    rep.atoms.push_back({t, w});
  }
  const Matrix expected = vy.adjoint() * sm.P_zero * vy;
  for (Index j = 0; j < moment.rows(); ++j)
    rep.moment_residual = std::max(rep.moment_residual, std::abs(moment(j, j) - expected(j, j)));
  return rep;
}

Matrix evaluate_rep(const IntegralRepresentation& rep, Complex lambda) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0 && rep.kind == FamilyKind::InverseStieltjes &&
      lambda.real() == 0.0)
    throw Error(ErrorKind::PoleHit, "evaluate_rep: lambda = 0 for the inverse kind");
  Matrix out = rep.Gamma;
  if (rep.Pi) out += lambda * *rep.Pi;
  for (const RepresentationAtom& a : rep.atoms) {
    const double gap = std::abs(a.t - lambda);
    if (gap <= 1e-10) throw Error(ErrorKind::PoleHit, "evaluate_rep: lambda at an atom", gap);
    if (rep.kind == FamilyKind::Stieltjes)
      out += a.weight / (a.t - lambda);
    else
      out += (1.0 / (a.t - lambda) - 1.0 / a.t) * a.weight;
  }
  return out;
}

std::vector<Complex> default_rep_grid() {
  std::vector<Complex> grid;
  for (double r : {0.25, 1.0, 4.0, 16.0})
    for (double a : {0.5, 1.5, 2.5, -1.0, -2.2}) grid.push_back(std::polar(r, a));
  return grid;
}

double reconstruction_error(const IntegralRepresentation& rep, const StieltjesConstruction& cons,
                            const std::vector<Complex>& grid) {
  require_bounded(cons, "reconstruction_error");
  StieltjesConstruction inv = cons;
  if (rep.kind == FamilyKind::InverseStieltjes) inv.A_hat = inverse(cons.A_hat);
  double worst = 0.0;
  for (Complex l : grid) {
    const Matrix x = rep.kind == FamilyKind::Stieltjes ? q0(cons, l) : r0(inv, l);
    const Matrix ref = cons.Z.adjoint() * x * cons.Z;
    worst = std::max(worst, spectral_norm(evaluate_rep(rep, l) - ref));
  }
  return worst;
}

}  // namespace stieltjes
