#include "statlim/descriptor_json.hpp"

#include <istream>
#include <ostream>

namespace statlim {

namespace {

using nlohmann::json;

json rational_pair(const Interval& p) {
  return json::array({format_rational(p.lo), format_rational(p.hi)});
}

Rational rational_field(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.get<int64_t>()));
  throw parse_error("descriptor: expected a rational as \"p/q\" string");
}

}  // namespace

json to_json(const RClosedSet& s) {
  json parts = json::array();
  for (const auto& p : s.parts()) parts.push_back(rational_pair(p));
  return json{{"parts", parts}};
}

RClosedSet rset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("parts") || !j["parts"].is_array()) {
    throw parse_error("closed set descriptor: expected {\"parts\": [[lo, hi], ...]}");
  }
  std::vector<Interval> parts;
  for (const auto& e : j["parts"]) {
    if (!e.is_array() || e.size() != 2) {
      throw parse_error("closed set descriptor: each part must be a [lo, hi] pair");
    }
    Rational lo = rational_field(e[0]);
    Rational hi = rational_field(e[1]);
    if (lo > hi) throw parse_error("closed set descriptor: part with lo > hi");
    parts.emplace_back(lo, hi);
  }
  return RClosedSet(std::move(parts));
}

json to_json(const RFSigma& s) {
  json layers = json::array();
  for (const auto& layer : s.layers) layers.push_back(to_json(layer));
  return json{{"layers", layers}};
}

RFSigma rfsigma_from_json(const json& j) {
  if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array()) {
    throw parse_error("F-sigma descriptor: expected {\"layers\": [...]}");
  }
  RFSigma out;
  for (const auto& e : j["layers"]) {
    RClosedSet layer = rset_from_json(e);
    if (layer.empty()) throw parse_error("F-sigma descriptor: empty layer");
    out.layers.push_back(std::move(layer));
  }
  return out;
}

json to_json(const IndexSet& s) {
  using K = IndexSetKind;
  const auto& n = s.node();
  switch (n.kind) {
    case K::empty:
      return json{{"empty", json::object()}};
    case K::all:
      return json{{"all", json::object()}};
    case K::finite_list:
      return json{{"finiteList", n.elems}};
    case K::ap:
      return json{{"ap", {{"r", n.a}, {"m", n.b}}}};
    case K::scaled_odd:
      return json{{"scaledOdd", n.a}};
    case K::squares:
      return json{{"squares", json::object()}};
    case K::power_multiples:
      return json{{"powerMultiples", {{"b", n.elems[0]}, {"e", n.b}}}};
    case K::powers:
      return json{{"powers", n.a}};
    case K::window:
      return json{{"window", {{"inner", to_json(IndexSet(n.x))}, {"a", n.a}, {"b", n.b}}}};
    case K::tail:
      return json{{"tail", {{"inner", to_json(IndexSet(n.x))}, {"cutoff", n.a}}}};
    case K::factorial_filter:
      return json{{"factorialFilter",
                   {{"inner", to_json(IndexSet(n.x))}, {"selector", to_json(IndexSet(n.y))}}}};
    case K::union_:
      return json{{"union", json::array({to_json(IndexSet(n.x)), to_json(IndexSet(n.y))})}};
    case K::intersect:
      return json{{"intersect", json::array({to_json(IndexSet(n.x)), to_json(IndexSet(n.y))})}};
    case K::diff:
      return json{{"diff", json::array({to_json(IndexSet(n.x)), to_json(IndexSet(n.y))})}};
  }
  throw parse_error("index set: unknown variant");
}

IndexSet index_set_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw parse_error("index set descriptor: expected a single-variant object");
  }
  const std::string key = j.begin().key();
  const json& v = j.begin().value();
  auto binary = [&](const json& arr, auto&& make) {
    if (!arr.is_array() || arr.size() < 2) {
      throw parse_error("index set descriptor: '" + key + "' expects two operands");
    }
    IndexSet acc = make(index_set_from_json(arr[0]), index_set_from_json(arr[1]));
    for (size_t i = 2; i < arr.size(); ++i) acc = make(acc, index_set_from_json(arr[i]));
    return acc;
  };
  if (key == "empty") return IndexSet::empty();
  if (key == "all") return IndexSet::all();
  if (key == "finiteList") return IndexSet::finite_list(v.get<std::vector<uint64_t>>());
  if (key == "ap") return IndexSet::ap(v.at("r").get<uint64_t>(), v.at("m").get<uint64_t>());
  if (key == "scaledOdd") return IndexSet::scaled_odd(v.get<uint32_t>());
  if (key == "squares") return IndexSet::squares();
  if (key == "powerMultiples") {
    return IndexSet::power_multiples(v.at("b").get<uint64_t>(), v.at("e").get<uint32_t>());
  }
  if (key == "powers") return IndexSet::powers(v.get<uint64_t>());
  if (key == "window") {
    return IndexSet::window(index_set_from_json(v.at("inner")), v.at("a").get<uint64_t>(),
                            v.at("b").get<uint64_t>());
  }
  if (key == "tail") {
    return IndexSet::tail(index_set_from_json(v.at("inner")), v.at("cutoff").get<uint64_t>());
  }
  if (key == "factorialFilter") {
    return IndexSet::factorial_filter(index_set_from_json(v.at("inner")),
                                      index_set_from_json(v.at("selector")));
  }
  if (key == "union") return binary(v, [](IndexSet a, IndexSet b) { return IndexSet::set_union(a, b); });
  if (key == "intersect") {
    return binary(v, [](IndexSet a, IndexSet b) { return IndexSet::set_intersect(a, b); });
  }
  if (key == "diff") {
    if (!v.is_array() || v.size() != 2) {
      throw parse_error("index set descriptor: 'diff' expects exactly two operands");
    }
    return IndexSet::set_diff(index_set_from_json(v[0]), index_set_from_json(v[1]));
  }
  throw parse_error("index set descriptor: unknown variant '" + key + "'");
}

json to_json(const Submeasure& phi) {
  switch (phi.kind()) {
    case SubmeasureKind::density:
      return json{{"density", json::object()}};
    case SubmeasureKind::summable_harmonic:
      return json{{"summable", {{"weights", "harmonic"}}}};
    case SubmeasureKind::counting:
      return json{{"counting", json::object()}};
  }
  throw parse_error("submeasure: unknown variant");
}

Submeasure submeasure_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw parse_error("submeasure descriptor: expected a single-variant object");
  }
  const std::string key = j.begin().key();
  if (key == "density") return Submeasure::density();
  if (key == "counting") return Submeasure::counting();
  if (key == "summable") {
    const json& v = j.begin().value();
    if (v.contains("weights") && v["weights"] != "harmonic") {
      throw parse_error("submeasure descriptor: only harmonic weights are supported");
    }
    return Submeasure::summable_harmonic();
  }
  throw parse_error("submeasure descriptor: unknown variant '" + key + "'");
}

json to_json(const IdealSpec& ideal) {
  switch (ideal.kind()) {
    case IdealKind::fin:
      return json{{"fin", json::object()}};
    case IdealKind::analytic_p:
      return json{{"analyticP", {{"phi", to_json(ideal.phi())}}}};
    case IdealKind::fsigma:
      return json{{"fsigma", {{"phi", to_json(ideal.phi())}}}};
    case IdealKind::fin_times_fin:
      return json{{"finTimesFin", {{"columns", "dyadic"}}}};
  }
  throw parse_error("ideal: unknown variant");
}

IdealSpec ideal_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw parse_error("ideal descriptor: expected a single-variant object");
  }
  const std::string key = j.begin().key();
  const json& v = j.begin().value();
  if (key == "fin") return IdealSpec::fin();
  if (key == "analyticP") return IdealSpec::analytic_p(submeasure_from_json(v.at("phi")));
  if (key == "fsigma") return IdealSpec::fsigma(submeasure_from_json(v.at("phi")));
  if (key == "finTimesFin") {
    if (v.contains("columns") && v["columns"] != "dyadic") {
      throw parse_error("ideal descriptor: only the dyadic column partition is supported");
    }
    return IdealSpec::fin_times_fin();
  }
  throw parse_error("ideal descriptor: unknown variant '" + key + "'");
}

void write_jsonl(std::ostream& os, const SeqGen& gen, uint64_t n) {
  json header{{"meta", gen.meta()}, {"count", n}};
  os << header.dump() << "\n";
  for (uint64_t i = 1; i <= n; ++i) {
    os << "{\"n\":" << i << ",\"x\":\"" << format_rational(gen(i)) << "\"}\n";
  }
}

std::pair<std::vector<Rational>, nlohmann::json> read_jsonl(std::istream& is) {
  std::string line;
  nlohmann::json meta;
  std::vector<Rational> values;
  uint64_t expected = 1;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw parse_error("stream: malformed JSON line");
    }
    if (first && j.contains("meta")) {
      meta = j["meta"];
      first = false;
      continue;
    }
    first = false;
    if (!j.contains("n") || !j.contains("x")) {
      throw parse_error("stream: record missing 'n' or 'x'");
    }
    if (j["n"].get<uint64_t>() != expected) {
      throw parse_error("stream: records out of order at n = " + std::to_string(expected));
    }
    values.push_back(parse_rational(j["x"].get<std::string>()));
    ++expected;
  }
  if (values.empty()) throw parse_error("stream: no value records");
  return {std::move(values), std::move(meta)};
}

}  // namespace statlim
