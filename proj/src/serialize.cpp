#include "stieltjes/serialize.hpp"

#include <fstream>
#include <sstream>

namespace stieltjes {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    parse_fail(std::string("field '") + key + "' must be a nonnegative integer");
  return static_cast<Index>(v.get<long long>());
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Json to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Subspace& s) {
  Json j;
  j["ambient_dim"] = s.ambient_dim;
  j["dim"] = s.dim();
  j["basis"] = to_json(s.basis);
  return j;
}

Json to_json(const LinearRelation& r) {
  Json j;
  j["space_dim"] = r.space_dim();
  j["graph"] = to_json(r.graph());
  return j;
}

Json to_json(const PassiveSelfadjointSystem& sys) {
  Json j;
  j["dim_m"] = sys.dim_m();
  j["dim_k"] = sys.dim_k();
  j["T"] = to_json(sys.T());
  return j;
}

Json to_json(const StieltjesConstruction& cons) {
  Json j;
  j["dim_m"] = cons.dim_m();
  j["dim_k"] = cons.dim_k();
  j["A_hat"] = to_json(cons.A_hat);
  j["V"] = to_json(cons.V);
  j["Z"] = to_json(cons.Z);
  j["dom_Z"] = to_json(cons.dom_Z);
  return j;
}

Json to_json(const IntegralRepresentation& rep) {
  Json j;
  j["kind"] = to_string(rep.kind);
  j["gamma"] = to_json(rep.Gamma);
  j["pi"] = rep.Pi ? to_json(*rep.Pi) : Json(nullptr);
  Json atoms = Json::array();
  for (const RepresentationAtom& a : rep.atoms) atoms.push_back(Json{{"t", a.t}, {"weight", to_json(a.weight)}});
  j["atoms"] = atoms;
  return j;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "re"), number(j[1], "im")};
  return {number(field(j, "re"), "re"), number(field(j, "im"), "im")};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("matrix must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) parse_fail("matrix rows must be arrays");
  const Index cols = static_cast<Index>(j[0].size());
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) parse_fail("ragged matrix");
    for (Index c = 0; c < cols; ++c) a(i, c) = complex_from_json(row[c]);
  }
  return a;
}

Subspace subspace_from_json(const Json& j) {
  const Index n = index_field(j, "ambient_dim");
  Matrix b = matrix_from_json(field(j, "basis"));
  if (b.size() == 0) return Subspace::zero(n);
  if (b.rows() != n) parse_fail("subspace basis rows != ambient_dim");
  // re-orthonormalize so hand-written files are accepted
  Subspace s = orthonormal_column_basis(b);
  if (s.dim() != b.cols()) parse_fail("subspace basis is rank deficient");
  return s;
}

LinearRelation relation_from_json(const Json& j) {
  const Index n = index_field(j, "space_dim");
  Subspace g = subspace_from_json(field(j, "graph"));
  if (g.ambient_dim != 2 * n) parse_fail("relation graph must live in C^(2n)");
  return LinearRelation(n, g);
}

PassiveSelfadjointSystem system_from_json(const Json& j) {
  const Index m = index_field(j, "dim_m");
  const Matrix t = matrix_from_json(field(j, "T"));
  if (j.contains("dim_k") && index_field(j, "dim_k") != t.rows() - m)
    parse_fail("system: dim_k does not match T");
  return PassiveSelfadjointSystem(m, t, 1e-9);
}

StieltjesConstruction construction_from_json(const Json& j) {
  const LinearRelation a = relation_from_json(field(j, "A_hat"));
  const Matrix v = matrix_from_json(field(j, "V"));
  const Matrix z = j.contains("Z") ? matrix_from_json(j.at("Z")) : Matrix::Identity(v.cols(), v.cols());
  if (j.contains("dom_Z")) return StieltjesConstruction::make(a, v, z, subspace_from_json(j.at("dom_Z")));
  return StieltjesConstruction::make(a, v, z);
}

IntegralRepresentation representation_from_json(const Json& j) {
  IntegralRepresentation rep;
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) parse_fail("kind must be a string");
  rep.kind = parse_family_kind(kind.get<std::string>());
  rep.Gamma = matrix_from_json(field(j, "gamma"));
  if (j.contains("pi") && !j.at("pi").is_null()) rep.Pi = matrix_from_json(j.at("pi"));
  for (const Json& a : field(j, "atoms")) rep.atoms.push_back({number(field(a, "t"), "t"), matrix_from_json(field(a, "weight"))});
  return rep;
}

Json family_instance(FamilyKind kind, const Json& origin) {
  Json j;
  j["kind"] = to_string(kind);
  j["origin"] = origin;
  return j;
}

namespace {

FamilyKind kind_of(const Json& j) {
  if (!j.contains("kind")) return FamilyKind::Stieltjes;
  if (!j.at("kind").is_string()) parse_fail("kind must be a string");
  return parse_family_kind(j.at("kind").get<std::string>());
}

RSFunction closed_form_rs(const Json& c) {
  const Json& type = field(c, "type");
  if (!type.is_string()) parse_fail("closed_form type must be a string");
  const std::string t = type.get<std::string>();
  if (t == "constant") return RSFunction::constant(matrix_from_json(field(c, "value")));
  if (t == "scaled_z") {
    const Complex s = complex_from_json(field(c, "c"));
    const Index n = index_field(c, "dim");
    return RSFunction(n, [s, n](Complex z) { return (s * z * Matrix::Identity(n, n)).eval(); }, "scaled_z");
  }
  if (t == "neg_h_over_lambda") return *family_neg_h_over_lambda(matrix_from_json(field(c, "H"))).omega;
  parse_fail("unknown closed_form type '" + t + "'");
}

}  // namespace

Family family_from_json(const Json& j) {
  const FamilyKind kind = kind_of(j);
  const Json& origin = field(j, "origin");
  if (origin.contains("system")) return family_from_rs(RSFunction::from_system(system_from_json(origin.at("system"))), kind);
  if (origin.contains("construction")) return family_from_construction(construction_from_json(origin.at("construction")), kind);
  if (origin.contains("closed_form")) {
    const Json& c = origin.at("closed_form");
    if (c.contains("type") && c.at("type") == "neg_h_over_lambda") {
      if (kind != FamilyKind::Stieltjes) parse_fail("neg_h_over_lambda is a Stieltjes family");
      return family_neg_h_over_lambda(matrix_from_json(field(c, "H")));
    }
    return family_from_rs(closed_form_rs(c), kind);
  }
  parse_fail("origin must hold system, construction or closed_form");
}

RSFunction rs_from_json(const Json& j) {
  const Json& origin = field(j, "origin");
  if (origin.contains("system")) return RSFunction::from_system(system_from_json(origin.at("system")));
  if (origin.contains("closed_form")) return closed_form_rs(origin.at("closed_form"));
  return omega_of(family_from_json(j));
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::IOError, "write failed for '" + path + "'");
}

}  // namespace stieltjes
