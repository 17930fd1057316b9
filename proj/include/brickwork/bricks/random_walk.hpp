#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brickwork/brick.hpp"

namespace brickwork {

// m independent Bernoulli(p) bits per step. A self-sustaining pacemaker drives
// every bit neuron suprathreshold each step; the bit neurons fire with
// probability p. Streams forever from t0 + 2.
class BinaryRngBrick final : public Brick {
 public:
  BinaryRngBrick(int bits, double p) : bits_(bits), p_(p) {
    if (bits < 1) throw error(errc::parameter, "random generator needs at least one bit");
    if (!(p > 0.0 && p <= 1.0)) throw error(errc::parameter, "bit probability must lie in (0, 1]");
  }

  std::string_view kind() const override { return "binary_rng"; }
  std::size_t arity() const override { return 0; }
  int bits() const noexcept { return bits_; }
  double p() const noexcept { return p_; }

 protected:
  Resolution do_resolve(std::span<const PortShape>) const override {
    Resolution r;
    r.outputs = {PortShape{{bits_}, Coding::binary_vector, Duration::streaming()}};
    r.metadata.t_out = Duration::streaming();
    r.metadata.depth = Depth(2);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape>, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto& f = b.fragment;
    std::tie(b.begin, b.done) = add_control(f, r.metadata);
    auto pacer = f.add_neuron(NeuronParams{}, Role::internal, {}, "pacer");
    f.add_synapse(b.begin, pacer, 1.0, 1);
    f.add_synapse(pacer, pacer, 1.0, 1);
    NeuronParams bit;
    bit.p_fire = p_;
    auto out = make_output_port(f, r.outputs[0], bit, "bit");
    for (const auto& id : out.neurons) f.add_synapse(pacer, id, 1.0, 1);
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  int bits_;
  double p_;
};

// Decodes an m-bit word per step (bit i weighs 2^i) into a one-hot line over
// 2^m. Decoder w has threshold m - 0.5 and collects +1 from each bit set in w,
// -m from each bit clear in w, and +1 from the complement pacemaker of every
// position clear in w. Only the matching decoder reaches m. A silent step
// decodes as word 0. Depth 2.
class BinaryToUnaryBrick final : public Brick {
 public:
  static constexpr int kDefaultMaxBits = 8;

  explicit BinaryToUnaryBrick(int bits, int max_bits = kDefaultMaxBits) : bits_(bits) {
    if (bits < 1) throw error(errc::parameter, "decoder needs at least one bit");
    if (bits > max_bits)
      throw error(errc::capacity, "decoder for " + std::to_string(bits) + " bits exceeds the bound of " +
                                      std::to_string(max_bits));
  }

  std::string_view kind() const override { return "binary_to_unary"; }
  std::size_t arity() const override { return 1; }
  int bits() const noexcept { return bits_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].size() != static_cast<std::size_t>(bits_))
      throw error(errc::shape, "decoder for " + std::to_string(bits_) + " bits got shape " + dims_to_string(in[0].dims));
    Resolution r;
    r.outputs = {PortShape{{1 << bits_}, Coding::one_hot, in[0].duration}};
    r.metadata.t_out = in[0].duration;
    r.metadata.depth = Depth(2);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto& f = b.fragment;
    std::tie(b.begin, b.done) = add_control(f, r.metadata);
    // A finite word stream stops the pacemakers after its last word.
    std::optional<NeuronId> stop;
    if (!in[0].duration.is_streaming()) {
      stop = f.add_neuron(NeuronParams{}, Role::internal, {}, "stop");
      f.add_synapse(b.begin, *stop, 1.0, in[0].duration.steps());
    }
    std::vector<NeuronId> bit, complement;
    for (int i = 0; i < bits_; ++i) {
      bit.push_back(f.add_neuron(NeuronParams{}, Role::internal, {}, "bit[" + std::to_string(i) + "]"));
      auto c = f.add_neuron(NeuronParams{}, Role::internal, {}, "complement[" + std::to_string(i) + "]");
      f.add_synapse(b.begin, c, 1.0, 1);
      f.add_synapse(c, c, 1.0, 1);
      if (stop) f.add_synapse(*stop, c, kInhibit, 1);
      complement.push_back(c);
    }
    NeuronParams decoder;
    decoder.threshold = bits_ - 0.5;
    auto out = make_output_port(f, r.outputs[0], decoder, "word");
    for (int w = 0; w < (1 << bits_); ++w) {
      const auto& d = out.neurons[static_cast<std::size_t>(w)];
      for (int i = 0; i < bits_; ++i) {
        const bool set = (w >> i) & 1;
        f.add_synapse(bit[static_cast<std::size_t>(i)], d, set ? 1.0 : -static_cast<double>(bits_), 1);
        if (!set) f.add_synapse(complement[static_cast<std::size_t>(i)], d, 1.0, 1);
      }
    }
    b.inputs.push_back(InputPort{in[0], bit, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  int bits_;
};

// Modular position tracker: one ring of M neurons per axis holding a single
// active bump. Input port lines are [+axis0, -axis0, +axis1, -axis1, ...];
// a silent pair means hold. Output port a is the ring of axis a.
//
// A bump shift goes through a coincidence gate (bump AND command, threshold
// 1.5) before reaching the neighbour, so the tracker works on a two-step
// cadence: commands emitted at t0 + 2n are applied, the bump fires at
// t0 + 1 + 2n, and commands on odd steps are ignored.
class GridTrackerBrick final : public Brick {
 public:
  static constexpr int kCadence = 2;

  explicit GridTrackerBrick(std::vector<int> ring_sizes, std::vector<int> start = {})
      : sizes_(std::move(ring_sizes)), start_(std::move(start)) {
    if (sizes_.empty()) throw error(errc::parameter, "grid tracker needs at least one axis");
    if (start_.empty()) start_.assign(sizes_.size(), 0);
    if (start_.size() != sizes_.size()) throw error(errc::parameter, "grid tracker start must give one index per axis");
    for (std::size_t a = 0; a < sizes_.size(); ++a) {
      if (sizes_[a] < 3) throw error(errc::parameter, "grid tracker rings need at least 3 neurons");
      if (start_[a] < 0 || start_[a] >= sizes_[a]) throw error(errc::parameter, "grid tracker start outside its ring");
    }
  }

  std::string_view kind() const override { return "grid_tracker"; }
  std::size_t arity() const override { return 1; }
  std::size_t output_count() const override { return sizes_.size(); }
  const std::vector<int>& ring_sizes() const noexcept { return sizes_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].size() != 2 * sizes_.size())
      throw error(errc::shape, "grid tracker with " + std::to_string(sizes_.size()) + " axes needs " +
                                   std::to_string(2 * sizes_.size()) + " command lines, got " + dims_to_string(in[0].dims));
    Resolution r;
    for (int m : sizes_) r.outputs.push_back(PortShape{{m}, Coding::one_hot, Duration::streaming()});
    r.metadata.t_out = Duration::streaming();
    r.metadata.depth = Depth(1);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto& f = b.fragment;
    std::tie(b.begin, b.done) = add_control(f, r.metadata);
    std::vector<NeuronId> command;
    NeuronParams gate;
    gate.threshold = 1.5;
    for (std::size_t a = 0; a < sizes_.size(); ++a) {
      const std::string axis = std::to_string(a);
      auto plus = f.add_neuron(NeuronParams{}, Role::internal, {}, "cmd+[" + axis + "]");
      auto minus = f.add_neuron(NeuronParams{}, Role::internal, {}, "cmd-[" + axis + "]");
      command.push_back(plus);
      command.push_back(minus);
      auto ring = make_output_port(f, r.outputs[a], NeuronParams{}, "ring" + axis);
      const int m = sizes_[a];
      for (int k = 0; k < m; ++k) {
        const auto& here = ring.neurons[static_cast<std::size_t>(k)];
        f.add_synapse(here, here, 1.0, kCadence);
        for (int dir : {+1, -1}) {
          auto shift = f.add_neuron(gate, Role::internal, {},
                                    std::string(dir > 0 ? "up" : "down") + axis + "[" + std::to_string(k) + "]");
          f.add_synapse(here, shift, 1.0, 1);
          f.add_synapse(dir > 0 ? plus : minus, shift, 1.0, 1);
          const auto& next = ring.neurons[static_cast<std::size_t>(((k + dir) % m + m) % m)];
          f.add_synapse(shift, next, 1.0, 1);
          f.add_synapse(shift, here, kInhibit, 1);
        }
      }
      f.add_synapse(b.begin, ring.neurons[static_cast<std::size_t>(start_[a])], 1.0, 1);
      b.outputs.push_back(std::move(ring));
    }
    b.inputs.push_back(InputPort{in[0], command, 1});
    return b;
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> start_;
};

}  // namespace brickwork
