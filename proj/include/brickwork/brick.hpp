#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brickwork/circuit.hpp"
#include "brickwork/error.hpp"

namespace brickwork {

// Large inhibitory weight; swamps any excitatory drive seen in practice.
inline constexpr double kInhibit = -1.0e6;
// Reset used for fire-once neurons.
inline constexpr double kFireOnceReset = -1.0e9;

enum class Coding { binary_vector, temporal_value, one_hot, raster };

constexpr std::string_view to_string(Coding c) noexcept {
  switch (c) {
    case Coding::binary_vector: return "binary-vector";
    case Coding::temporal_value: return "temporal-value";
    case Coding::one_hot: return "one-hot";
    case Coding::raster: return "raster";
  }
  return "binary-vector";
}

inline Coding coding_from_string(std::string_view s) {
  if (s == "binary-vector" || s == "binary") return Coding::binary_vector;
  if (s == "temporal-value" || s == "temporal") return Coding::temporal_value;
  if (s == "one-hot") return Coding::one_hot;
  if (s == "raster") return Coding::raster;
  throw error(errc::parameter, "unknown coding '" + std::string(s) + "'");
}

// Number of timesteps a port carries spikes for; empty when streaming.
class Duration {
 public:
  constexpr Duration() = default;
  constexpr explicit Duration(int steps) : steps_(steps) {}
  static constexpr Duration streaming() { Duration d; d.steps_ = std::nullopt; return d; }

  constexpr bool is_streaming() const noexcept { return !steps_.has_value(); }
  constexpr int steps() const { return steps_.value(); }

  friend constexpr bool operator==(const Duration&, const Duration&) = default;

 private:
  std::optional<int> steps_ = 1;
};

inline std::string to_string(const Duration& d) {
  return d.is_streaming() ? std::string("inf") : std::to_string(d.steps());
}

inline Duration longest(Duration a, Duration b) {
  if (a.is_streaming() || b.is_streaming()) return Duration::streaming();
  return Duration(std::max(a.steps(), b.steps()));
}

// Timesteps from input presentation to first output; empty when only known at run time.
class Depth {
 public:
  constexpr Depth() = default;
  constexpr explicit Depth(int steps) : steps_(steps) {}
  static constexpr Depth runtime() { Depth d; d.steps_ = std::nullopt; return d; }

  constexpr bool is_runtime() const noexcept { return !steps_.has_value(); }
  constexpr int steps() const { return steps_.value(); }

  friend constexpr bool operator==(const Depth&, const Depth&) = default;

 private:
  std::optional<int> steps_ = 0;
};

inline std::string to_string(const Depth& d) {
  return d.is_runtime() ? std::string("runtime") : std::to_string(d.steps());
}

struct PortShape {
  std::vector<int> dims;
  Coding coding = Coding::binary_vector;
  Duration duration{1};

  std::size_t size() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }
  bool same_dims(const PortShape& other) const { return dims == other.dims; }
};

inline std::string dims_to_string(const std::vector<int>& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + (dims.size() == 1 ? ",)" : ")");
}

inline void check_shape(const PortShape& shape, std::string_view what) {
  if (shape.dims.empty()) throw error(errc::shape, std::string(what) + ": port dims must be non-empty");
  for (int d : shape.dims)
    if (d < 1) throw error(errc::shape, std::string(what) + ": port dims must be >= 1, got " + dims_to_string(shape.dims));
}

// Row-major coordinates of flat position `pos` within `dims`.
inline std::vector<int> unravel(std::size_t pos, const std::vector<int>& dims) {
  std::vector<int> coord(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    coord[k] = static_cast<int>(pos % static_cast<std::size_t>(dims[k]));
    pos /= static_cast<std::size_t>(dims[k]);
  }
  return coord;
}

inline std::optional<std::size_t> ravel(const std::vector<int>& coord, const std::vector<int>& dims) {
  if (coord.size() != dims.size()) return std::nullopt;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (coord[k] < 0 || coord[k] >= dims[k]) return std::nullopt;
    pos = pos * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(coord[k]);
  }
  return pos;
}

inline std::string index_suffix(const std::vector<int>& coord) {
  std::string s = "[";
  for (std::size_t i = 0; i < coord.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coord[i]);
  }
  return s + "]";
}

struct BrickMetadata {
  std::vector<std::size_t> n_in;   // neurons per input port
  Duration t_in{1};
  std::vector<std::size_t> n_out;  // neurons per output port
  Duration t_out{1};
  Depth depth{0};
};

struct Resolution {
  BrickMetadata metadata;
  std::vector<PortShape> outputs;
};

// Neurons that accept the upstream synapses of one input port, in row-major
// line order. The upstream hop uses `arrival_delay` as its synaptic delay.
struct InputPort {
  PortShape shape;
  std::vector<NeuronId> neurons;
  int arrival_delay = 1;
};

struct OutputPort {
  PortShape shape;
  std::vector<NeuronId> neurons;  // each output-tagged, index = row-major coordinate
};

struct BuiltBrick {
  Circuit fragment;
  std::vector<InputPort> inputs;
  std::vector<OutputPort> outputs;
  NeuronId begin;
  NeuronId done;
  BrickMetadata metadata;
};

// Supplies the namespace and provenance tag under which a brick lays its neurons.
class Namer {
 public:
  Namer(std::string ns, std::string brick_tag) : ns_(std::move(ns)), tag_(std::move(brick_tag)) {}

  const std::string& name_space() const noexcept { return ns_; }
  const std::string& brick_tag() const noexcept { return tag_; }
  Circuit fragment() const { return Circuit(ns_, tag_); }

 private:
  std::string ns_;
  std::string tag_;
};

// A circuit generator. Instances are immutable; resolve_metadata() and build()
// are pure functions of the input shapes and the namer.
//
// Timing contract: `begin` fires at the step the upstream outputs are emitted
// (the presentation time t0). The inter-brick hop therefore counts toward this
// brick's depth: first outputs appear no earlier than t0 + D. For fixed-depth
// bricks `done` fires at exactly t0 + D + T_out, one step after the last
// output step; runtime-depth bricks fire `done` once, after their outputs.
class Brick {
 public:
  virtual ~Brick() = default;

  virtual std::string_view kind() const = 0;
  virtual std::size_t arity() const = 0;
  virtual std::size_t output_count() const { return 1; }

  Resolution resolve_metadata(std::span<const PortShape> inputs) const {
    check_arity(inputs);
    for (const auto& s : inputs) check_shape(s, kind());
    Resolution r = do_resolve(inputs);
    r.metadata.n_in.clear();
    r.metadata.t_in = Duration(1);
    bool first = true;
    for (const auto& s : inputs) {
      r.metadata.n_in.push_back(s.size());
      r.metadata.t_in = first ? s.duration : longest(r.metadata.t_in, s.duration);
      first = false;
    }
    r.metadata.n_out.clear();
    for (const auto& s : r.outputs) r.metadata.n_out.push_back(s.size());
    return r;
  }

  BuiltBrick build(std::span<const PortShape> inputs, const Namer& namer) const {
    Resolution r = resolve_metadata(inputs);
    BuiltBrick b = [&] {
      try {
        return do_build(inputs, r, namer);
      } catch (const error&) {
        throw;
      } catch (const std::exception& e) {
        throw error(errc::build, namer.brick_tag() + " (" + std::string(kind()) + "): " + e.what());
      }
    }();
    b.metadata = r.metadata;
    check_built(b, r, namer);
    return b;
  }

 protected:
  virtual Resolution do_resolve(std::span<const PortShape> inputs) const = 0;
  virtual BuiltBrick do_build(std::span<const PortShape> inputs, const Resolution& r, const Namer& namer) const = 0;

  // Output-tagged neurons for a port of the given shape, one per row-major position.
  static OutputPort make_output_port(Circuit& frag, const PortShape& shape, const NeuronParams& params,
                                     std::string_view stem) {
    OutputPort port{shape, {}};
    for (std::size_t pos = 0; pos < shape.size(); ++pos) {
      auto coord = unravel(pos, shape.dims);
      port.neurons.push_back(frag.add_neuron(params, Role::output, coord, std::string(stem) + index_suffix(coord)));
    }
    return port;
  }

  // Adds begin and done control neurons; fixed-depth bricks get done relayed
  // from begin through a single synapse of delay D + T_out.
  static std::pair<NeuronId, NeuronId> add_control(Circuit& frag, const BrickMetadata& md) {
    auto begin = frag.add_neuron(NeuronParams{}, Role::control, {}, "begin");
    NeuronParams done_params;
    done_params.decay = 0.0;
    done_params.reset = kFireOnceReset;
    auto done = frag.add_neuron(done_params, Role::control, {}, "done");
    if (!md.depth.is_runtime() && !md.t_out.is_streaming())
      frag.add_synapse(begin, done, 1.0, md.depth.steps() + md.t_out.steps());
    return {begin, done};
  }

 private:
  void check_arity(std::span<const PortShape> inputs) const {
    if (inputs.size() != arity())
      throw error(errc::arity, std::string(kind()) + " expects " + std::to_string(arity()) + " input port(s), got " +
                                   std::to_string(inputs.size()));
  }

  void check_built(const BuiltBrick& b, const Resolution& r, const Namer& namer) const {
    auto fail = [&](const std::string& why) {
      throw error(errc::build, namer.brick_tag() + " (" + std::string(kind()) + "): " + why);
    };
    if (auto v = validate(b.fragment); !v.empty()) fail("fragment invalid: " + v.front().element + ": " + v.front().message);
    if (b.outputs.size() != r.outputs.size()) fail("output port count disagrees with metadata");
    for (std::size_t p = 0; p < b.outputs.size(); ++p) {
      const auto& port = b.outputs[p];
      if (port.neurons.size() != r.metadata.n_out[p]) fail("output port size disagrees with metadata");
      for (std::size_t pos = 0; pos < port.neurons.size(); ++pos) {
        const auto& n = b.fragment.neuron(port.neurons[pos]);
        if (n.role != Role::output) fail("output port neuron " + n.id + " is not output-tagged");
        if (ravel(n.index, port.shape.dims) != pos) fail("output port neuron " + n.id + " has a misplaced index");
      }
    }
    if (b.inputs.size() != arity()) fail("input port count disagrees with arity");
    for (const auto& port : b.inputs) {
      if (port.neurons.size() != port.shape.size()) fail("input port size disagrees with its shape");
      if (port.arrival_delay < 1) fail("input port arrival delay must be >= 1");
      for (const auto& id : port.neurons)
        if (!b.fragment.contains(id)) fail("input port references missing neuron " + id);
    }
    if (b.fragment.neuron(b.begin).role != Role::control) fail("begin is not control-tagged");
    if (b.fragment.neuron(b.done).role != Role::control) fail("done is not control-tagged");
  }
};

using BrickPtr = std::shared_ptr<const Brick>;

// Standalone test bench for one built brick: an input-tagged `go` neuron
// drives begin one step later, and one input-tagged source per input line
// reproduces the inter-brick hop. Injecting a source at t behaves exactly like
// an upstream output spike emitted at t.
struct Harness {
  Circuit circuit;
  NeuronId go;
  std::vector<std::vector<NeuronId>> sources;  // [port][line]
};

inline Harness make_harness(const BuiltBrick& built) {
  Harness h{Circuit(built.fragment.name_space(), "harness"), {}, {}};
  h.circuit.merge(built.fragment);
  h.go = h.circuit.add_neuron(NeuronParams{}, Role::input, {}, "go");
  h.circuit.add_synapse(h.go, built.begin, 1.0, 1);
  for (std::size_t p = 0; p < built.inputs.size(); ++p) {
    const auto& port = built.inputs[p];
    std::vector<NeuronId> lines;
    for (std::size_t i = 0; i < port.neurons.size(); ++i) {
      auto src = h.circuit.add_neuron(NeuronParams{}, Role::input, {}, "src" + std::to_string(p) + "_" + std::to_string(i));
      h.circuit.add_synapse(src, port.neurons[i], 1.0, port.arrival_delay);
      lines.push_back(src);
    }
    h.sources.push_back(std::move(lines));
  }
  return h;
}

}  // namespace brickwork
