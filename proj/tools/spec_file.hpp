#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "nacap/nacap.hpp"

namespace nacap::cli {

/// Malformed spec file or flag value (exit code 2).
class SpecError : public Error {
 public:
  using Error::Error;
};

enum class FieldKind { levi_civita, rational, rational_function };

/// Parsed graph spec: the raw JSON plus the fields read eagerly.
struct GraphSpec {
  nlohmann::ordered_json raw;
  std::string name;
  FieldKind field = FieldKind::levi_civita;
  PrecisionConfig precision;
  std::string kind;
};

inline GraphSpec parse_spec(const std::string& text) {
  GraphSpec s;
  try {
    s.raw = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!s.raw.is_object()) throw SpecError("spec must be a JSON object");
  s.name = s.raw.value("name", "");
  const std::string field = s.raw.value("field", "levi-civita");
  if (field == "levi-civita") {
    s.field = FieldKind::levi_civita;
  } else if (field == "rational") {
    s.field = FieldKind::rational;
  } else if (field == "rational-function") {
    s.field = FieldKind::rational_function;
  } else {
    throw SpecError("unknown field '" + field + "'");
  }
  if (s.raw.contains("precision")) {
    const auto& p = s.raw["precision"];
    if (p.contains("window")) s.precision.window = p["window"].get<long>();
    if (p.contains("max_terms")) s.precision.max_terms = p["max_terms"].get<std::size_t>();
  }
  if (!s.raw.contains("kind")) throw SpecError("spec has no 'kind'");
  s.kind = s.raw["kind"].get<std::string>();
  if (s.kind != "path" && s.kind != "spherical" && s.kind != "explicit") {
    throw SpecError("unknown graph kind '" + s.kind + "'");
  }
  return s;
}

inline GraphSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

/// Field literal in the spec's field: LC uses `e`, Q(r) uses `r`.
template <OrderedField F>
F parse_literal(const std::string& text) {
  try {
    if constexpr (std::is_same_v<F, LCElement>) {
      return parse_lc(text);
    } else if constexpr (std::is_same_v<F, RFElement>) {
      return parse_rf(text);
    } else {
      return parse_rational(text);
    }
  } catch (const ParseError& e) {
    throw SpecError("bad literal '" + text + "': " + e.what());
  }
}

inline Rational json_rational(const nlohmann::ordered_json& j, const char* key, const Rational& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const ParseError&) {
  }
  throw SpecError(std::string("'") + key + "' must be a rational number");
}

template <OrderedField F>
std::vector<F> literal_list(const nlohmann::ordered_json& j, const char* what) {
  if (!j.is_array()) throw SpecError(std::string(what) + " must be a list of literals");
  std::vector<F> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw SpecError(std::string(what) + " entries must be strings");
    out.push_back(parse_literal<F>(v.get<std::string>()));
  }
  return out;
}

template <OrderedField F>
WeightRule<F> parse_rule(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("rule")) throw SpecError("weight rule must be an object with a 'rule' key");
  const std::string name = j["rule"].get<std::string>();
  const Rational c = json_rational(j, "coefficient", 1);
  if (name == "eps_pow_k") return WeightRule<F>::eps_pow_k(c, json_rational(j, "shift", 0));
  if (name == "eps_pow_neg_k") return WeightRule<F>::eps_pow_neg_k(c, json_rational(j, "shift", 0));
  if (name == "const") return WeightRule<F>::constant(json_rational(j, "value", 1));
  if (name == "factorial_eps") {
    return WeightRule<F>::factorial_eps(j.value("factorial_power", 1), json_rational(j, "alpha", 1), c);
  }
  if (name == "eps_pow_half_pow_k") return WeightRule<F>::eps_pow_half_pow_k();
  if (name == "monomial") {
    return WeightRule<F>::monomial(c, j.value("factorial_power", 0), json_rational(j, "alpha", 0),
                                   json_rational(j, "beta", 0));
  }
  if (name == "custom_list") {
    if (!j.contains("values")) throw SpecError("custom_list needs 'values'");
    auto values = literal_list<F>(j["values"], "custom_list values");
    if (j.value("repeat", false)) return WeightRule<F>::periodic(std::move(values));
    if (!j.contains("then")) throw SpecError("custom_list needs 'then' or \"repeat\": true");
    return parse_rule<F>(j["then"]).with_prefix(std::move(values));
  }
  throw SpecError("unknown weight rule '" + name + "'");
}

template <OrderedField F>
WeightedGraph<F> apply_measure(const WeightedGraph<F>& g, const nlohmann::ordered_json& raw) {
  if (!raw.contains("measure")) return g;
  const auto& m = raw["measure"];
  if (m.is_string() && m.get<std::string>() == "degree") return g.with_degree_measure();
  if (m.is_string() && m.get<std::string>() == "one") return g;
  throw SpecError("measure must be \"one\" or \"degree\" here");
}

/// Graph described by the spec over the field F.
template <OrderedField F>
WeightedGraph<F> build_graph(const GraphSpec& s) {
  const auto& raw = s.raw;
  if (s.kind == "path") {
    if (!raw.contains("weights")) throw SpecError("path spec needs 'weights'");
    const auto& w = raw["weights"];
    if (w.is_array()) return apply_measure(make_finite_path(literal_list<F>(w, "weights")), raw);
    return apply_measure(make_path(parse_rule<F>(w)), raw);
  }
  if (s.kind == "spherical") {
    if (!raw.contains("b_plus")) throw SpecError("spherical spec needs 'b_plus'");
    SphericalProfile<F> p{parse_rule<F>(raw["b_plus"]), std::nullopt, SphereSizes::constant_one()};
    if (raw.contains("b_minus")) p.b_minus = parse_rule<F>(raw["b_minus"]);
    if (raw.contains("sphere_sizes")) {
      const auto& sz = raw["sphere_sizes"];
      if (!sz.is_number_integer() || sz.get<long>() < 1) throw SpecError("sphere_sizes must be a positive integer base");
      p.sizes = SphereSizes::power(sz.get<std::size_t>());
    }
    return apply_measure(make_spherical(p), raw);
  }
  // explicit
  if (!raw.contains("vertices") || !raw.contains("edges")) throw SpecError("explicit spec needs 'vertices' and 'edges'");
  const std::size_t n = raw["vertices"].get<std::size_t>();
  std::vector<std::tuple<Vertex, Vertex, F>> edges;
  for (const auto& e : raw["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[2].is_string()) throw SpecError("edges must be [u, v, \"weight\"]");
    edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>(), parse_literal<F>(e[2].get<std::string>()));
  }
  std::optional<std::vector<F>> measure;
  bool degree = false;
  if (raw.contains("measure")) {
    const auto& m = raw["measure"];
    if (m.is_array()) {
      measure = literal_list<F>(m, "measure");
    } else if (m.is_string() && m.get<std::string>() == "degree") {
      degree = true;
    } else if (!(m.is_string() && m.get<std::string>() == "one")) {
      throw SpecError("measure must be a list, \"one\" or \"degree\"");
    }
  }
  auto g = make_explicit<F>(n, edges, measure);
  return degree ? g.with_degree_measure() : g;
}

/// Optional function values u(0), u(1), ... from the spec's "u" list.
template <OrderedField F>
std::optional<VertexFunction<F>> spec_function(const GraphSpec& s) {
  if (!s.raw.contains("u")) return std::nullopt;
  const auto values = literal_list<F>(s.raw["u"], "u");
  VertexFunction<F> u;
  for (std::size_t i = 0; i < values.size(); ++i) u[i] = values[i];
  return u;
}

}  // namespace nacap::cli
