#include "ncd/serialize.hpp"

#include <fstream>
#include <sstream>

namespace ncd {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& at(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, "missing field \"" + key + "\"");
  return *it;
}

std::string get_string(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = at(j, key, where);
  if (!v.is_string()) schema_error(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::size_t get_size(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = at(j, key, where);
  if (!v.is_number_unsigned()) schema_error(where + "/" + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

const Json& get_array(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = at(j, key, where);
  if (!v.is_array()) schema_error(where + "/" + key, "expected an array");
  return v;
}

Json rationals_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

RationalVector rationals_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of rationals");
  RationalVector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

Json doubles_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json points_json(const std::vector<std::vector<double>>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(doubles_json(x));
  return a;
}

Json component_json(const ComponentDescriptor& c) {
  Json a = Json::array();
  for (const auto& s : c.conditions) {
    Json e;
    e["polynomial"] = to_json(s.poly);
    e["sign"] = s.positive ? "positive" : "negative";
    a.push_back(std::move(e));
  }
  return a;
}

ComponentDescriptor component_from_json(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of sign conditions");
  ComponentDescriptor c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    std::string sign = get_string(j[i], "sign", w);
    if (sign != "positive" && sign != "negative") schema_error(w + "/sign", "expected \"positive\" or \"negative\"");
    c.conditions.push_back({polynomial_from_json(at(j[i], "polynomial", w), n, w + "/polynomial"), sign == "positive"});
  }
  return c;
}

Point2 point2_from_json(const Json& j, const std::string& where) {
  RationalVector v = rationals_from_json(j, where);
  if (v.size() != 2) schema_error(where, "expected two coordinates");
  return {v[0], v[1]};
}

Json metadata(const Primitive& p) {
  Json m = Json::object();
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfPlaneData>) {
          m["p1"] = rationals_json(RationalVector{d.p1[0], d.p1[1]});
          m["p2"] = rationals_json(RationalVector{d.p2[0], d.p2[1]});
          m["side"] = d.side == Side::plus ? "plus" : "minus";
        } else if constexpr (std::is_same_v<T, HyperbolaData>) {
          m["variant"] = d.variant == HyperbolaVariant::left_ray ? "left_ray" : "right_ray";
          m["a"] = to_json(d.a);
          m["b"] = to_json(d.b);
          m["c"] = to_json(d.c);
        } else if constexpr (std::is_same_v<T, EllipsoidData>) {
          m["center"] = rationals_json(d.center);
          m["squared_semi_axes"] = rationals_json(d.squared_semi_axes);
        } else if constexpr (std::is_same_v<T, CylinderData>) {
          m["axes"] = d.axes;
          m["base"] = to_json(*d.base);
        }
      },
      p.data());
  return m;
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["tag"] = p.tag;
  j["strip_half_width"] = to_json(p.strip_half_width);
  j["hole_shrink"] = to_json(p.hole_shrink);
  return j;
}

std::string verdict_text(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

Json to_json(const Rational& r) {
  Json j;
  j["num"] = r.get_num().get_str();
  j["den"] = r.get_den().get_str();
  return j;
}

Rational rational_from_json(const Json& j, const std::string& where) {
  std::string num = get_string(j, "num", where), den = get_string(j, "den", where);
  mpz_class a, b;
  if (a.set_str(num, 10) != 0) schema_error(where + "/num", "not an integer: \"" + num + "\"");
  if (b.set_str(den, 10) != 0) schema_error(where + "/den", "not an integer: \"" + den + "\"");
  if (b == 0) schema_error(where + "/den", "zero denominator");
  Rational r(a, b);
  r.canonicalize();
  return r;
}

Json to_json(const Polynomial& p) {
  Json j;
  j["text"] = p.to_string();
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t;
    t["exponent"] = e;
    t["coefficient"] = to_json(c);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

Polynomial polynomial_from_json(const Json& j, std::size_t num_vars, const std::string& where) {
  Polynomial p(num_vars);
  const Json& terms = get_array(j, "terms", where);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where + "/terms/" + std::to_string(i);
    const Json& e = get_array(terms[i], "exponent", w);
    if (e.size() != num_vars) schema_error(w + "/exponent", "expected " + std::to_string(num_vars) + " entries");
    Exponent ex;
    for (const auto& v : e) {
      if (!v.is_number_unsigned()) schema_error(w + "/exponent", "expected non-negative integers");
      ex.push_back(v.get<std::uint32_t>());
    }
    p.add_term(ex, rational_from_json(at(terms[i], "coefficient", w), w + "/coefficient"));
  }
  if (j.contains("text")) {
    Polynomial q = Polynomial::parse(get_string(j, "text", where), num_vars);
    if (!(q == p)) schema_error(where + "/text", "text form disagrees with the sparse terms");
  }
  return p;
}

Json to_json(const Primitive& p) {
  Json j;
  j["kind"] = to_string(p.kind());
  j["metadata"] = metadata(p);
  j["polynomial"] = to_json(p.f());
  j["component_descriptor"] = component_json(p.component());
  j["witness"] = rationals_json(p.witness());
  return j;
}

Primitive primitive_from_json(const Json& j, std::size_t n, const std::string& where) {
  const std::string tag = get_string(j, "kind", where);
  PrimitiveKind kind;
  try {
    kind = parse_primitive_kind(tag);
  } catch (const InputError& e) {
    schema_error(where + "/kind", e.what());
  }
  const Json& meta = at(j, "metadata", where);
  const std::string mw = where + "/metadata";
  auto rebuild = [&]() -> Primitive {
    switch (kind) {
      case PrimitiveKind::half_plane: {
        std::string side = get_string(meta, "side", mw);
        if (side != "plus" && side != "minus") schema_error(mw + "/side", "expected \"plus\" or \"minus\"");
        return half_plane(point2_from_json(at(meta, "p1", mw), mw + "/p1"),
                          point2_from_json(at(meta, "p2", mw), mw + "/p2"), side == "plus" ? Side::plus : Side::minus);
      }
      case PrimitiveKind::hyperbola_region: {
        std::string v = get_string(meta, "variant", mw);
        if (v != "left_ray" && v != "right_ray") schema_error(mw + "/variant", "expected \"left_ray\" or \"right_ray\"");
        return hyperbola_region(v == "left_ray" ? HyperbolaVariant::left_ray : HyperbolaVariant::right_ray,
                                rational_from_json(at(meta, "a", mw), mw + "/a"),
                                rational_from_json(at(meta, "b", mw), mw + "/b"),
                                rational_from_json(at(meta, "c", mw), mw + "/c"));
      }
      case PrimitiveKind::ellipsoid_body:
      case PrimitiveKind::ellipsoid_hole:
        return ellipsoid(rationals_from_json(at(meta, "center", mw), mw + "/center"),
                         rationals_from_json(at(meta, "squared_semi_axes", mw), mw + "/squared_semi_axes"),
                         kind == PrimitiveKind::ellipsoid_hole);
      case PrimitiveKind::cylinder: {
        const Json& axes = get_array(meta, "axes", mw);
        std::vector<std::size_t> ax;
        for (const auto& a : axes) {
          if (!a.is_number_unsigned()) schema_error(mw + "/axes", "expected non-negative integers");
          ax.push_back(a.get<std::size_t>());
        }
        Primitive base = primitive_from_json(at(meta, "base", mw), ax.size(), mw + "/base");
        return embed(base, n, ax);
      }
      case PrimitiveKind::generic:
        return generic_primitive(polynomial_from_json(at(j, "polynomial", where), n, where + "/polynomial"),
                                 rationals_from_json(at(j, "witness", where), where + "/witness"),
                                 component_from_json(at(j, "component_descriptor", where), n,
                                                     where + "/component_descriptor"));
    }
    schema_error(where + "/kind", "unsupported kind");
  };
  Primitive p = [&] {
    try {
      return rebuild();
    } catch (const InputError& e) {
      std::string msg = e.what();
      if (!msg.empty() && msg.front() == '/') throw;
      schema_error(mw, msg);
    }
  }();
  if (p.dim() != n) schema_error(where, "primitive lives in R^" + std::to_string(p.dim()) + ", expected R^" + std::to_string(n));
  // Whatever the file states beyond the metadata must match the rebuilt primitive.
  Polynomial stored = polynomial_from_json(at(j, "polynomial", where), n, where + "/polynomial");
  if (!(stored == p.f())) schema_error(where + "/polynomial", "stored polynomial disagrees with the metadata");
  if (rationals_from_json(at(j, "witness", where), where + "/witness") != p.witness()) {
    schema_error(where + "/witness", "stored witness disagrees with the metadata");
  }
  if (at(j, "component_descriptor", where) != component_json(p.component())) {
    schema_error(where + "/component_descriptor", "stored component descriptor disagrees with the metadata");
  }
  return p;
}

Json to_json(const Profile& p) {
  Json j;
  Json intervals = Json::array();
  for (const auto& iv : p.intervals) {
    Json e;
    e["lo"] = to_json(iv.lo);
    e["hi"] = to_json(iv.hi);
    e["label"] = iv.label;
    e["bounded"] = iv.bounded;
    intervals.push_back(std::move(e));
  }
  j["intervals"] = std::move(intervals);
  j["singular_values"] = rationals_json(p.singular_values);
  j["image"] = rationals_json(RationalVector{p.image_lo, p.image_hi});
  return j;
}

Profile profile_from_json(const Json& j, const std::string& where) {
  Profile p;
  const Json& intervals = get_array(j, "intervals", where);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const std::string w = where + "/intervals/" + std::to_string(i);
    IntervalExpectation iv;
    iv.lo = rational_from_json(at(intervals[i], "lo", w), w + "/lo");
    iv.hi = rational_from_json(at(intervals[i], "hi", w), w + "/hi");
    const Json& label = at(intervals[i], "label", w);
    if (!label.is_number_integer() || (label != 0 && label != 1)) schema_error(w + "/label", "expected 0 or 1");
    iv.label = label.get<int>();
    const Json& bounded = at(intervals[i], "bounded", w);
    if (!bounded.is_boolean()) schema_error(w + "/bounded", "expected a boolean");
    iv.bounded = bounded.get<bool>();
    p.intervals.push_back(iv);
  }
  p.singular_values = rationals_from_json(at(j, "singular_values", where), where + "/singular_values");
  RationalVector image = rationals_from_json(at(j, "image", where), where + "/image");
  if (image.size() != 2) schema_error(where + "/image", "expected [lo, hi]");
  p.image_lo = image[0];
  p.image_hi = image[1];
  return p;
}

Json to_json(const Arrangement& A) {
  const Provenance& prov = A.provenance();
  Json j;
  j["version"] = kFormatVersion;
  j["n"] = A.n();
  j["t_values"] = rationals_json(prov.t_values);
  j["labels"] = prov.labels;
  j["variant"] = prov.variant;
  Json prims = Json::array();
  for (const auto& p : A.primitives()) prims.push_back(to_json(p));
  j["primitives"] = std::move(prims);
  j["seed_point"] = rationals_json(A.seed_point());
  j["provenance"] = provenance_json(prov);
  j["expected"] = A.expected() ? to_json(*A.expected()) : Json(nullptr);
  return j;
}

Arrangement arrangement_from_json(const Json& j) {
  const std::string w;
  const Json& version = at(j, "version", w);
  if (version != kFormatVersion) schema_error("/version", "unsupported format version " + version.dump());
  const std::size_t n = get_size(j, "n", w);
  if (n == 0) schema_error("/n", "dimension must be positive");
  Provenance prov;
  prov.t_values = rationals_from_json(at(j, "t_values", w), "/t_values");
  const Json& labels = get_array(j, "labels", w);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) schema_error("/labels/" + std::to_string(i), "expected 0 or 1");
    prov.labels.push_back(labels[i].get<int>());
  }
  prov.variant = get_string(j, "variant", w);
  const Json& pj = at(j, "provenance", w);
  prov.tag = get_string(pj, "tag", "/provenance");
  prov.strip_half_width = rational_from_json(at(pj, "strip_half_width", "/provenance"), "/provenance/strip_half_width");
  prov.hole_shrink = rational_from_json(at(pj, "hole_shrink", "/provenance"), "/provenance/hole_shrink");

  const Json& prims = get_array(j, "primitives", w);
  std::vector<Primitive> primitives;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    primitives.push_back(primitive_from_json(prims[i], n, "/primitives/" + std::to_string(i)));
  }
  if (primitives.empty()) schema_error("/primitives", "at least one primitive required");
  RationalVector seed = rationals_from_json(at(j, "seed_point", w), "/seed_point");
  if (seed.size() != n) schema_error("/seed_point", "expected " + std::to_string(n) + " coordinates");
  std::optional<Profile> expected;
  const Json& ej = at(j, "expected", w);
  if (!ej.is_null()) expected = profile_from_json(ej, "/expected");

  // Files may describe degenerate fixtures (empty D); keep them loadable and let check_ncd report.
  Arrangement A = Arrangement::unchecked(n, std::move(primitives), std::move(seed), std::move(prov));
  A.set_expected(std::move(expected));
  return A;
}

Json to_json(const LiftedManifold& L, const std::string& base_reference) {
  Json j;
  j["version"] = kFormatVersion;
  j["base_reference"] = base_reference;
  j["m"] = L.m();
  j["n"] = L.n();
  j["l"] = L.l();
  j["ambient_dim"] = L.ambient_dim();
  j["block_sizes"] = L.block_sizes();
  Json vars = Json::array();
  for (std::size_t k = 0; k < L.n(); ++k) vars.push_back("x" + std::to_string(k + 1));
  for (std::size_t b = 0; b < L.l(); ++b) {
    for (std::size_t k = 0; k < L.block_sizes()[b]; ++k) {
      vars.push_back("y" + std::to_string(b + 1) + "_" + std::to_string(k + 1));
    }
  }
  j["variables"] = std::move(vars);
  Json eqs = Json::array();
  for (const auto& e : L.equations()) eqs.push_back(to_json(e));
  j["equations"] = std::move(eqs);
  j["base"] = to_json(L.base());
  return j;
}

LiftedManifold manifold_from_json(const Json& j) {
  const std::string w;
  const Json& version = at(j, "version", w);
  if (version != kFormatVersion) schema_error("/version", "unsupported format version " + version.dump());
  auto base = std::make_shared<const Arrangement>([&] {
    try {
      return arrangement_from_json(at(j, "base", w));
    } catch (const InputError& e) {
      throw InputError(std::string("/base") + e.what());
    }
  }());
  LiftedManifold L(base, get_size(j, "m", w));
  const Json& eqs = get_array(j, "equations", w);
  if (eqs.size() != L.equations().size()) schema_error("/equations", "expected " + std::to_string(L.l()) + " equations");
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const std::string ew = "/equations/" + std::to_string(i);
    if (!(polynomial_from_json(eqs[i], L.ambient_dim(), ew) == L.equations()[i])) {
      schema_error(ew, "equation disagrees with the lift of the base arrangement");
    }
  }
  return L;
}

std::string equations_text(const LiftedManifold& L) {
  std::string out;
  for (const auto& e : L.equations()) out += e.to_string() + "\n";
  return out;
}

Json to_json(const SliceClass& s) {
  Json j;
  j["t"] = s.t;
  j["boundedness"] = to_string(s.boundedness);
  j["agree"] = s.agree;
  Json a;
  a["verdict"] = to_string(s.analytic.verdict);
  a["supported"] = s.analytic.supported;
  a["detail"] = s.analytic.detail;
  j["analytic"] = std::move(a);
  Json e;
  e["verdict"] = to_string(s.empirical.verdict);
  e["components"] = s.empirical.components;
  e["grid_points"] = s.empirical.grid_points;
  e["members"] = s.empirical.members;
  e["base_point"] = doubles_json(s.empirical.base_point);
  e["escape_witness"] = doubles_json(s.empirical.escape_witness);
  e["enclosing_radius"] = s.empirical.enclosing_radius;
  j["empirical"] = std::move(e);
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["version"] = kFormatVersion;
  j["instance"] = r.instance;
  j["seed"] = r.seed;
  j["m"] = r.m;
  j["n"] = r.n;
  j["l"] = r.l;
  j["verdict"] = verdict_text(r.passed);
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["id"] = c.id;
    e["verdict"] = to_string(c.verdict);
    e["tolerance"] = c.tolerance;
    e["detail"] = c.detail;
    e["samples"] = c.samples;
    e["witnesses"] = points_json(c.witnesses);
    e["counterexamples"] = points_json(c.counterexamples);
    if (r.include_timings) e["wall_ms"] = c.wall_ms;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  Json sv = Json::array();
  for (const auto& v : r.singular_values) {
    Json e;
    e["value"] = v.value;
    e["exact"] = v.exact ? to_json(*v.exact) : Json(nullptr);
    e["source"] = v.source;
    Json active = Json::array();
    for (std::size_t a : v.active) active.push_back(a + 1);
    e["active"] = std::move(active);
    e["witness"] = doubles_json(v.witness);
    sv.push_back(std::move(e));
  }
  j["singular_values"] = std::move(sv);
  Json slices = Json::array();
  for (const auto& s : r.slices) slices.push_back(to_json(s));
  j["slices"] = std::move(slices);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

bool is_manifold_json(const Json& j) { return j.is_object() && j.contains("m") && j.contains("equations"); }

}  // namespace ncd
