#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "brickwork/circuit.hpp"
#include "brickwork/error.hpp"

namespace brickwork::io {

inline constexpr std::string_view kCircuitDocVersion = "brickwork-circuit/1";

inline nlohmann::json to_json(const Circuit& c) {
  using nlohmann::json;
  json neurons = json::array();
  for (const auto& [id, n] : c.neurons()) {
    json attrs = json::object();
    for (const auto& [k, v] : n.attrs) attrs[k] = v;
    neurons.push_back({{"id", id},
                       {"threshold", n.params.threshold},
                       {"decay", n.params.decay},
                       {"reset", n.params.reset},
                       {"p", n.params.p_fire},
                       {"v0", n.params.initial_voltage},
                       {"index", n.index},
                       {"tag", std::string(to_string(n.role))},
                       {"brick_tag", n.brick_tag},
                       {"attrs", std::move(attrs)}});
  }
  json synapses = json::array();
  for (const auto& [key, s] : c.synapses()) {
    json attrs = json::object();
    for (const auto& [k, v] : s.attrs) attrs[k] = v;
    synapses.push_back(
        {{"pre", s.pre}, {"post", s.post}, {"weight", s.weight}, {"delay", s.delay}, {"attrs", std::move(attrs)}});
  }
  return {{"version", kCircuitDocVersion},
          {"namespace", c.name_space()},
          {"neurons", std::move(neurons)},
          {"synapses", std::move(synapses)}};
}

// Canonical text: sorted keys, neurons by id, synapses by (pre, post),
// two-space indent, trailing newline.
inline std::string encode_circuit(const Circuit& c) {
  require_valid(c);
  return to_json(c).dump(2) + "\n";
}

namespace detail {

class DocReader {
 public:
  [[noreturn]] static void fail(const std::string& where, const std::string& why) {
    throw error(errc::decode, where + ": " + why);
  }

  static const nlohmann::json& field(const nlohmann::json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
  }

  static void only_fields(const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : obj.items())
      if (!allowed.count(k)) fail(where, "unexpected field '" + k + "'");
  }

  static double number(const nlohmann::json& obj, const std::string& where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
  }

  static int integer(const nlohmann::json& obj, const std::string& where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
  }

  static std::string text(const nlohmann::json& obj, const std::string& where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
  }

  static Attributes attributes(const nlohmann::json& obj, const std::string& where) {
    const auto& v = field(obj, where, "attrs");
    if (!v.is_object()) fail(where + ".attrs", "expected an object");
    Attributes out;
    for (const auto& [k, val] : v.items()) out.emplace(k, val);
    return out;
  }
};

}  // namespace detail

inline Circuit from_json(const nlohmann::json& doc) {
  using R = detail::DocReader;
  if (!doc.is_object()) R::fail("document", "expected an object");
  R::only_fields(doc, "document", {"version", "namespace", "neurons", "synapses"});
  if (auto v = R::text(doc, "document", "version"); v != kCircuitDocVersion)
    R::fail("version", "unsupported version '" + v + "'");
  Circuit c(R::text(doc, "document", "namespace"));

  const auto& neurons = R::field(doc, "document", "neurons");
  if (!neurons.is_array()) R::fail("neurons", "expected an array");
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const auto& n = neurons[i];
    const std::string where = "neurons[" + std::to_string(i) + "]";
    if (!n.is_object()) R::fail(where, "expected an object");
    R::only_fields(n, where, {"id", "threshold", "decay", "reset", "p", "v0", "index", "tag", "brick_tag", "attrs"});
    Neuron out;
    out.id = R::text(n, where, "id");
    if (c.contains(out.id)) R::fail(where + ".id", "duplicate neuron id '" + out.id + "'");
    out.params.threshold = R::number(n, where, "threshold");
    out.params.decay = R::number(n, where, "decay");
    out.params.reset = R::number(n, where, "reset");
    out.params.p_fire = R::number(n, where, "p");
    out.params.initial_voltage = R::number(n, where, "v0");
    if (!(out.params.decay >= 0.0 && out.params.decay <= 1.0)) R::fail(where + ".decay", "must lie in [0, 1]");
    if (!(out.params.p_fire > 0.0 && out.params.p_fire <= 1.0)) R::fail(where + ".p", "must lie in (0, 1]");
    const auto& index = R::field(n, where, "index");
    if (!index.is_array()) R::fail(where + ".index", "expected an array");
    for (const auto& x : index) {
      if (!x.is_number_integer()) R::fail(where + ".index", "expected integers");
      out.index.push_back(x.get<int>());
    }
    try {
      out.role = role_from_string(R::text(n, where, "tag"));
    } catch (const error& e) {
      R::fail(where + ".tag", e.what());
    }
    if (out.role == Role::output && out.index.empty()) R::fail(where + ".index", "output neuron needs an index");
    out.brick_tag = R::text(n, where, "brick_tag");
    out.attrs = R::attributes(n, where);
    c.insert_unchecked(std::move(out));
  }

  const auto& synapses = R::field(doc, "document", "synapses");
  if (!synapses.is_array()) R::fail("synapses", "expected an array");
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    const auto& s = synapses[i];
    const std::string where = "synapses[" + std::to_string(i) + "]";
    if (!s.is_object()) R::fail(where, "expected an object");
    R::only_fields(s, where, {"pre", "post", "weight", "delay", "attrs"});
    Synapse out;
    out.pre = R::text(s, where, "pre");
    out.post = R::text(s, where, "post");
    if (!c.contains(out.pre)) R::fail(where + ".pre", "references missing neuron '" + out.pre + "'");
    if (!c.contains(out.post)) R::fail(where + ".post", "references missing neuron '" + out.post + "'");
    if (c.contains(out.pre, out.post)) R::fail(where, "duplicate synapse " + out.pre + " -> " + out.post);
    out.weight = R::number(s, where, "weight");
    out.delay = R::integer(s, where, "delay");
    if (out.delay < 1) R::fail(where + ".delay", "must be >= 1");
    out.attrs = R::attributes(s, where);
    c.insert_unchecked(std::move(out));
  }
  return c;
}

inline Circuit decode_circuit(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw error(errc::decode, std::string("document: malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

}  // namespace brickwork::io
