#pragma once

#include <string>

#include "json.hpp"
#include "ncd/lift.hpp"
#include "ncd/slice.hpp"
#include "ncd/verify.hpp"

namespace ncd {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json to_json(const Polynomial& p);
/// Reads the sparse form; the text form, when present, must denote the same polynomial.
Polynomial polynomial_from_json(const Json& j, std::size_t num_vars, const std::string& where);

Json to_json(const Primitive& p);
/// Rebuilds the primitive from its metadata and rejects the entry unless the
/// stored polynomial, component and witness match the rebuilt ones.
Primitive primitive_from_json(const Json& j, std::size_t n, const std::string& where);

Json to_json(const Profile& p);
Profile profile_from_json(const Json& j, const std::string& where);

Json to_json(const Arrangement& A);
Arrangement arrangement_from_json(const Json& j);

/// Manifold file: the base arrangement is embedded so the file is self-contained;
/// `base_reference` records where it came from.
Json to_json(const LiftedManifold& L, const std::string& base_reference = "");
LiftedManifold manifold_from_json(const Json& j);

/// One equation per line in the variables x1..xN; y_{j,k} are x_{n+1}.. in block order.
std::string equations_text(const LiftedManifold& L);

Json to_json(const SliceClass& s);
Json to_json(const VerificationReport& r);

/// Pretty-printed with a trailing newline; byte-stable for equal inputs.
std::string dump(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Parses a JSON file, naming the file and byte offset on syntax errors.
Json read_json_file(const std::string& path);

/// Either an arrangement or a manifold file, distinguished by the `m` field.
bool is_manifold_json(const Json& j);

}  // namespace ncd
