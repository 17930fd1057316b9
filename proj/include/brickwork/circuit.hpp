#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "brickwork/error.hpp"

namespace brickwork {

using NeuronId = std::string;

// Open key/value bag for extended dynamics (learning rates and the like).
// Carried through merge and serialization; never executed.
using Attributes = std::map<std::string, nlohmann::json>;

enum class Role { input, output, control, internal };

constexpr std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::input: return "input";
    case Role::output: return "output";
    case Role::control: return "control";
    case Role::internal: return "internal";
  }
  return "internal";
}

inline Role role_from_string(std::string_view s) {
  if (s == "input") return Role::input;
  if (s == "output") return Role::output;
  if (s == "control") return Role::control;
  if (s == "internal") return Role::internal;
  throw error(errc::parameter, "unknown neuron role '" + std::string(s) + "'");
}

// Defaults make a bare neuron a pure repeater: any positive input fires it and
// the voltage fully leaks every step.
struct NeuronParams {
  double threshold = 0.5;
  double reset = 0.0;
  double decay = 1.0;  // fraction of voltage lost per step
  double p_fire = 1.0;
  double initial_voltage = 0.0;

  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

// Empty string when the parameters are admissible, otherwise the reason.
inline std::string check_params(const NeuronParams& p) {
  if (!std::isfinite(p.threshold)) return "threshold must be finite";
  if (!std::isfinite(p.reset)) return "reset must be finite";
  if (!std::isfinite(p.initial_voltage)) return "initial voltage must be finite";
  if (!(p.decay >= 0.0 && p.decay <= 1.0)) return "decay must lie in [0, 1]";
  if (!(p.p_fire > 0.0 && p.p_fire <= 1.0)) return "firing probability must lie in (0, 1]";
  return {};
}

struct Neuron {
  NeuronId id;
  NeuronParams params;
  std::vector<int> index;  // coding position within the owning brick's output port
  Role role = Role::internal;
  std::string brick_tag;
  Attributes attrs;
};

struct Synapse {
  NeuronId pre;
  NeuronId post;
  double weight = 1.0;
  int delay = 1;
  Attributes attrs;
};

struct Violation {
  std::string element;
  std::string message;
};

using SynapseKey = std::pair<NeuronId, NeuronId>;

// Directed graph of LIF neurons and delayed point synapses. Ids have the form
// `<namespace>:<brick_tag>:<local-name>`. Neurons and synapses are kept in
// ordered maps so every traversal is deterministic.
class Circuit {
 public:
  explicit Circuit(std::string ns = "main", std::string default_tag = "circuit")
      : namespace_(std::move(ns)), default_tag_(std::move(default_tag)) {}

  const std::string& name_space() const noexcept { return namespace_; }
  const std::string& default_tag() const noexcept { return default_tag_; }

  NeuronId make_id(std::string_view brick_tag, std::string_view local) const {
    std::string id = namespace_;
    id += ':';
    id += brick_tag.empty() ? std::string_view(default_tag_) : brick_tag;
    id += ':';
    id += local;
    return id;
  }

  // An empty local name gets a generated one.
  NeuronId add_neuron(const NeuronParams& params, Role role, std::vector<int> index = {},
                      std::string_view local = {}, std::string_view brick_tag = {},
                      Attributes attrs = {}) {
    if (auto why = check_params(params); !why.empty()) throw error(errc::parameter, why);
    if (role == Role::output && index.empty())
      throw error(errc::parameter, "output neuron requires a non-empty index");
    std::string name = local.empty() ? "n" + std::to_string(auto_counter_++) : std::string(local);
    NeuronId id = make_id(brick_tag, name);
    while (local.empty() && neurons_.count(id)) id = make_id(brick_tag, "n" + std::to_string(auto_counter_++));
    if (neurons_.count(id)) throw error(errc::namespace_clash, "neuron id '" + id + "' already exists");
    Neuron n{id, params, std::move(index), role,
             std::string(brick_tag.empty() ? std::string_view(default_tag_) : brick_tag), std::move(attrs)};
    neurons_.emplace(id, std::move(n));
    return id;
  }

  const Synapse& add_synapse(const NeuronId& pre, const NeuronId& post, double weight, int delay,
                             Attributes attrs = {}) {
    if (!neurons_.count(pre)) throw error(errc::missing_neuron, "unknown presynaptic neuron '" + pre + "'");
    if (!neurons_.count(post)) throw error(errc::missing_neuron, "unknown postsynaptic neuron '" + post + "'");
    if (delay < 1) throw error(errc::parameter, "synapse delay must be >= 1, got " + std::to_string(delay));
    if (!std::isfinite(weight)) throw error(errc::parameter, "synapse weight must be finite");
    SynapseKey key{pre, post};
    if (synapses_.count(key)) throw error(errc::duplicate_edge, "synapse " + pre + " -> " + post + " already exists");
    auto [it, _] = synapses_.emplace(std::move(key), Synapse{pre, post, weight, delay, std::move(attrs)});
    return it->second;
  }

  bool contains(const NeuronId& id) const { return neurons_.count(id) != 0; }
  bool contains(const NeuronId& pre, const NeuronId& post) const { return synapses_.count({pre, post}) != 0; }

  const Neuron& neuron(const NeuronId& id) const {
    auto it = neurons_.find(id);
    if (it == neurons_.end()) throw error(errc::missing_neuron, "unknown neuron '" + id + "'");
    return it->second;
  }
  Neuron& neuron(const NeuronId& id) {
    auto it = neurons_.find(id);
    if (it == neurons_.end()) throw error(errc::missing_neuron, "unknown neuron '" + id + "'");
    return it->second;
  }

  const Synapse& synapse(const NeuronId& pre, const NeuronId& post) const {
    auto it = synapses_.find({pre, post});
    if (it == synapses_.end()) throw error(errc::missing_neuron, "no synapse " + pre + " -> " + post);
    return it->second;
  }

  const std::map<NeuronId, Neuron>& neurons() const noexcept { return neurons_; }
  const std::map<SynapseKey, Synapse>& synapses() const noexcept { return synapses_; }
  std::size_t neuron_count() const noexcept { return neurons_.size(); }
  std::size_t synapse_count() const noexcept { return synapses_.size(); }

  // Raw insertion with no invariant checks; used by decoders and tests that
  // need to construct malformed circuits. Run validate() afterwards.
  void insert_unchecked(Neuron n) { neurons_.insert_or_assign(n.id, std::move(n)); }
  void insert_unchecked(Synapse s) {
    SynapseKey key{s.pre, s.post};
    synapses_.insert_or_assign(std::move(key), std::move(s));
  }

  // Copies every neuron and synapse of `src` into this circuit, renaming ids
  // to `prefix/<id>` (ids unchanged for an empty prefix). Returns old -> new.
  // Strong guarantee: on a clash nothing is inserted.
  std::map<NeuronId, NeuronId> merge(const Circuit& src, std::string_view prefix = {}) {
    std::map<NeuronId, NeuronId> mapping;
    for (const auto& [id, _] : src.neurons_) {
      NeuronId renamed = prefix.empty() ? id : std::string(prefix) + "/" + id;
      if (neurons_.count(renamed))
        throw error(errc::namespace_clash, "merging would duplicate neuron id '" + renamed + "'");
      mapping.emplace(id, std::move(renamed));
    }
    for (const auto& [id, n] : src.neurons_) {
      Neuron copy = n;
      copy.id = mapping.at(id);
      neurons_.emplace(copy.id, std::move(copy));
    }
    for (const auto& [key, s] : src.synapses_) {
      Synapse copy = s;
      auto pre = mapping.find(s.pre);
      auto post = mapping.find(s.post);
      // Dangling endpoints in a malformed source keep their names.
      if (pre != mapping.end()) copy.pre = pre->second;
      if (post != mapping.end()) copy.post = post->second;
      insert_unchecked(std::move(copy));
    }
    return mapping;
  }

 private:
  std::string namespace_;
  std::string default_tag_;
  std::size_t auto_counter_ = 0;
  std::map<NeuronId, Neuron> neurons_;
  std::map<SynapseKey, Synapse> synapses_;
};

inline std::vector<Violation> validate(const Circuit& circuit) {
  std::vector<Violation> out;
  for (const auto& [id, n] : circuit.neurons()) {
    if (n.id != id) out.push_back({id, "neuron id field '" + n.id + "' does not match its key"});
    if (auto why = check_params(n.params); !why.empty()) out.push_back({id, why});
    if (n.role == Role::output && n.index.empty()) out.push_back({id, "output neuron has an empty index"});
  }
  for (const auto& [key, s] : circuit.synapses()) {
    std::string name = key.first + " -> " + key.second;
    if (s.pre != key.first || s.post != key.second) out.push_back({name, "synapse endpoints do not match its key"});
    if (!circuit.contains(s.pre)) out.push_back({name, "presynaptic neuron '" + s.pre + "' does not exist"});
    if (!circuit.contains(s.post)) out.push_back({name, "postsynaptic neuron '" + s.post + "' does not exist"});
    if (s.delay < 1) out.push_back({name, "delay must be >= 1"});
    if (!std::isfinite(s.weight)) out.push_back({name, "weight must be finite"});
  }
  return out;
}

inline void require_valid(const Circuit& circuit) {
  auto violations = validate(circuit);
  if (violations.empty()) return;
  std::string msg = std::to_string(violations.size()) + " violation(s): ";
  msg += violations.front().element + ": " + violations.front().message;
  throw error(errc::validation, msg);
}

}  // namespace brickwork
