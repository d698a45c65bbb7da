#pragma once

#include <string>

#include "json.hpp"
#include "stieltjes/families.hpp"
#include "stieltjes/integral_rep.hpp"

namespace stieltjes {

using Json = nlohmann::ordered_json;

// complex as {"re", "im"}; matrices as row-major nested arrays
Json to_json(Complex c);
Json to_json(const Matrix& a);
Json to_json(const Subspace& s);
Json to_json(const LinearRelation& r);
Json to_json(const PassiveSelfadjointSystem& sys);
Json to_json(const StieltjesConstruction& cons);
Json to_json(const IntegralRepresentation& rep);

// All parsers raise ParseError on malformed input.
Complex complex_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
Subspace subspace_from_json(const Json& j);
LinearRelation relation_from_json(const Json& j);
PassiveSelfadjointSystem system_from_json(const Json& j);
StieltjesConstruction construction_from_json(const Json& j);
IntegralRepresentation representation_from_json(const Json& j);

// Instance file: {"kind": ..., "origin": {"system" | "construction" |
// "closed_form": ...}}. closed_form types: "constant" (Omega = D),
// "scaled_z" (Omega(z) = c z I) and "neg_h_over_lambda" (Q = -H/l).
Json family_instance(FamilyKind kind, const Json& origin);
Family family_from_json(const Json& j);
// the RS function behind an instance
RSFunction rs_from_json(const Json& j);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stieltjes
