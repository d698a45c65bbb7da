#include "stieltjes/linrel.hpp"

#include <cmath>
#include <random>

namespace stieltjes {

LinearRelation::LinearRelation(Index space_dim, Subspace graph)
    : n_(space_dim), graph_(std::move(graph)) {
  if (graph_.ambient_dim != 2 * n_)
    throw Error(ErrorKind::DimensionMismatch, "relation graph must live in M (+) M");
}

LinearRelation LinearRelation::from_pairs(const Matrix& first, const Matrix& second,
                                          double tol) {
  if (first.rows() != second.rows() || first.cols() != second.cols())
    throw Error(ErrorKind::ShapeMismatch, "from_pairs: component shapes differ");
  const Index n = first.rows();
  Matrix stacked(2 * n, first.cols());
  stacked << first, second;
  return LinearRelation(n, orthonormal_column_basis(stacked, tol));
}

LinearRelation LinearRelation::from_operator(const Matrix& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::ShapeMismatch, "from_operator: matrix not square");
  return from_pairs(Matrix::Identity(a.rows(), a.rows()), a);
}

LinearRelation LinearRelation::purely_multivalued(Index n) {
  return from_pairs(Matrix::Zero(n, n), Matrix::Identity(n, n));
}

LinearRelation LinearRelation::zero_operator(Index n) {
  return from_operator(Matrix::Zero(n, n));
}

RelationParts parts(const LinearRelation& r, double tol) {
  const Index n = r.space_dim();
  const Matrix f = r.first();
  const Matrix g = r.second();
  RelationParts p;
  p.dom = orthonormal_column_basis(f, tol, 1.0);
  p.ran = orthonormal_column_basis(g, tol, 1.0);
  if (r.dim() == 0) {
    p.ker = Subspace::zero(n);
    p.mul = Subspace::zero(n);
    return p;
  }
  // {f, 0} in R: coefficients c with g c = 0
  Matrix kc = null_space(g, tol, 1.0);
  p.ker = orthonormal_column_basis(f * kc, tol, 1.0);
  Matrix mc = null_space(f, tol, 1.0);
  p.mul = orthonormal_column_basis(g * mc, tol, 1.0);
  if (kc.cols() == 0) p.ker = Subspace::zero(n);
  if (mc.cols() == 0) p.mul = Subspace::zero(n);
  return p;
}

LinearRelation adjoint(const LinearRelation& r) {
  const Index n = r.space_dim();
  // R* = { (g, g') : (f', g) = (f, g') }, the complement of {(f', -f)}
  Matrix flipped(2 * n, r.dim());
  flipped << r.second(), -r.first();
  Subspace j(2 * n, flipped);
  return LinearRelation(n, orthogonal_complement(j));
}

LinearRelation apply_block(const LinearRelation& r, Complex a, Complex b, Complex c,
                           Complex d) {
  const Matrix f = r.first();
  const Matrix g = r.second();
  return LinearRelation::from_pairs(a * f + b * g, c * f + d * g);
}

LinearRelation inverse(const LinearRelation& r) { return apply_block(r, 0, 1, 1, 0); }

LinearRelation scalar_shift(const LinearRelation& r, Complex lambda) {
  return apply_block(r, 1, 0, -lambda, 1);
}

LinearRelation scale(const LinearRelation& r, Complex c) {
  return apply_block(r, 1, 0, 0, c);
}

LinearRelation negate(const LinearRelation& r) { return scale(r, -1.0); }

LinearRelation add_operator(const LinearRelation& r, const Matrix& b) {
  if (b.rows() != r.space_dim() || b.cols() != r.space_dim())
    throw Error(ErrorKind::ShapeMismatch, "add_operator: operator shape");
  const Matrix f = r.first();
  return LinearRelation::from_pairs(f, r.second() + b * f);
}

LinearRelation compose(const LinearRelation& r, const LinearRelation& s) {
  if (r.space_dim() != s.space_dim())
    throw Error(ErrorKind::DimensionMismatch, "compose: space dimensions differ");
  const Index n = r.space_dim();
  const Index a = s.dim(), b = r.dim();
  if (a == 0 || b == 0) return LinearRelation(n, Subspace::zero(2 * n));
  // S-pairs (S1 c, S2 c) chain into R-pairs (R1 d, R2 d) when S2 c = R1 d
  Matrix m(n, a + b);
  m << s.second(), -r.first();
  Matrix k = null_space(m, kRankTol, 1.0);
  if (k.cols() == 0) return LinearRelation(n, Subspace::zero(2 * n));
  return LinearRelation::from_pairs(s.first() * k.topRows(a), r.second() * k.bottomRows(b));
}

LinearRelation cayley(const LinearRelation& a) { return apply_block(a, 1, 1, 1, -1); }

double relation_distance(const LinearRelation& a, const LinearRelation& b) {
  if (a.space_dim() != b.space_dim())
    throw Error(ErrorKind::DimensionMismatch, "relation_distance: space dimensions differ");
  return subspace_distance(a.graph(), b.graph());
}

bool relation_equal(const LinearRelation& a, const LinearRelation& b, double tol) {
  return relation_distance(a, b) < tol;
}

Matrix resolvent(const LinearRelation& r, Complex lambda, double tol) {
  const Index n = r.space_dim();
  if (n == 0) return Matrix(0, 0);
  if (r.dim() != n)
    throw Error(ErrorKind::NotInResolventSet,
                "resolvent: graph dimension differs from space dimension");
  const Matrix f = r.first();
  const Matrix x = r.second() - lambda * f;
  Matrix b;
  try {
    b = f * inverse_guarded(x);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotInResolventSet, "resolvent: R - lambda not invertible",
                e.residual());
  }
  // {B g, g + lambda B g} must lie in the graph
  Matrix pairs(2 * n, n);
  pairs << b, Matrix::Identity(n, n) + lambda * b;
  const Matrix& q = r.graph().basis;
  const double res = spectral_norm(pairs - q * (q.adjoint() * pairs));
  if (res > tol * (1.0 + spectral_norm(b)))
    throw Error(ErrorKind::IllConditioned, "resolvent: graph membership residual", res);
  return b;
}

Matrix to_operator(const LinearRelation& r, double tol) {
  const Index n = r.space_dim();
  if (n == 0) return Matrix(0, 0);
  if (r.dim() != n)
    throw Error(ErrorKind::NotAnOperator, "to_operator: graph dimension differs from n");
  const Matrix f = r.first();
  Eigen::JacobiSVD<Matrix> svd(f);
  const double smin = svd.singularValues()(n - 1);
  if (smin <= tol)
    throw Error(ErrorKind::NotAnOperator, "to_operator: multivalued or not everywhere defined",
                smin);
  return r.second() * inverse_guarded(f);
}

bool is_selfadjoint(const LinearRelation& r, double tol) {
  return relation_distance(r, adjoint(r)) < tol;
}

namespace {

// Hermitian part of the form (f', f) over the graph basis pairs
Matrix graph_form(const LinearRelation& r) {
  return hermitian_part(r.first().adjoint() * r.second());
}

}  // namespace

bool is_nonnegative(const LinearRelation& r, double tol) {
  if (!is_selfadjoint(r, tol)) return false;
  if (r.dim() == 0) return true;
  return min_eig_hermitian(graph_form(r)) >= -tol;
}

bool is_nonpositive(const LinearRelation& r, double tol) {
  if (!is_selfadjoint(r, tol)) return false;
  if (r.dim() == 0) return true;
  return max_eig_hermitian(graph_form(r)) <= tol;
}

double verify_resolvent_connection(const LinearRelation& a, Complex lambda) {
  if (std::abs(1.0 - lambda) < 1e-8 || std::abs(1.0 + lambda) < 1e-8)
    throw Error(ErrorKind::BadPoint, "verify_resolvent_connection: lambda = +-1 excluded");
  const Index n = a.space_dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix lhs = resolvent(a, lambda);
  const Matrix t = to_operator(cayley(a));
  const Complex p = 1.0 + lambda, m = 1.0 - lambda;
  const Matrix form1 =
      -(1.0 / p) * (id + (2.0 / p) * inverse_guarded(t - (m / p) * id));
  const Matrix form2 = (1.0 / m) * (t + id) * inverse_guarded(id - (p / m) * t);
  return std::max(spectral_norm(lhs - form1), spectral_norm(lhs - form2));
}

NumericalRangeSample numerical_range(const LinearRelation& r, std::size_t samples,
                                     std::uint64_t seed) {
  const RelationParts p = parts(r);
  if (p.dom.dim() == 0) throw Error(ErrorKind::EmptyDomain, "numerical_range: trivial domain");
  const Matrix f = r.first();
  const Matrix g = r.second();
  const Matrix f_pinv = pinv(f, kRankTol, 1.0);
  NumericalRangeSample out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index d = p.dom.dim();
  for (std::size_t s = 0; s < samples; ++s) {
    Vector a(d);
    for (Index i = 0; i < d; ++i) a(i) = Complex(normal(rng), normal(rng));
    Vector x = p.dom.basis * a;
    x /= x.norm();
    const Vector c = f_pinv * x;
    out.values.push_back(inner(g * c, x));
  }
  for (Index j = 0; j < r.dim(); ++j) {
    const Vector x = f.col(j);
    const double nx = x.norm();
    if (nx <= 1e-8) continue;
    out.values.push_back(inner(g.col(j), x) / (nx * nx));
  }
  out.sample_count = out.values.size();
  return out;
}

LinearRelation OperatorPartDecomposition::reassemble() const {
  const Index n = mul.ambient_dim;
  // graph of the operator part on dom, plus {0} x mul
  Matrix first(n, dom.dim() + mul.dim());
  Matrix second(n, dom.dim() + mul.dim());
  first << dom.basis, Matrix::Zero(n, mul.dim());
  second << ambient * dom.basis, mul.basis;
  return LinearRelation::from_pairs(first, second);
}

OperatorPartDecomposition operator_part(const LinearRelation& r, double tol) {
  const RelationParts p = parts(r);
  const Index n = r.space_dim();
  if (p.dom.dim() > 0 && p.mul.dim() > 0 &&
      spectral_norm(p.dom.basis.adjoint() * p.mul.basis) > tol)
    throw Error(ErrorKind::NotDecomposable, "operator_part: dom not orthogonal to mul");
  OperatorPartDecomposition out;
  out.mul = p.mul;
  out.dom = p.dom;
  out.complement = orthogonal_complement(p.mul);
  const Matrix proj = Matrix::Identity(n, n) - p.mul.projector();
  out.ambient = proj * r.second() * pinv(r.first(), kRankTol, 1.0);
  out.local = out.complement.basis.adjoint() * out.ambient * out.complement.basis;
  return out;
}

bool form_leq(const LinearRelation& a, const LinearRelation& b, bool nonnegative,
              double tol) {
  if (!nonnegative) return form_leq(negate(b), negate(a), true, tol);
  const Matrix ra = resolvent(a, -1.0);
  const Matrix rb = resolvent(b, -1.0);
  return min_eig_hermitian(ra - rb) >= -tol;
}

}  // namespace stieltjes
