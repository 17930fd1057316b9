#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brickwork/brick.hpp"

namespace brickwork {

// Maximum cross-correlation of two binary vectors u, v of length N.
//
// Layout: 2N landing relays, an N x N coincidence layer (neuron (i, j) is
// AND(u_i, v_j) and votes for offset s = j - i), and 2N - 1 race neurons, one
// per offset. Race neuron s integrates its overlap count c_s without leak and
// a pacemaker adds +1 per step from the following step on; with threshold
// N - 0.5 it crosses N - c_s steps after the counts land. The first crossers
// inhibit every other race neuron and the pacemaker, so exactly the argmax
// offsets fire, at t0 + 3 + (N - c_max). Depth is therefore data dependent.
//
// Output position k encodes offset s = k - (N - 1).
class CrossCorrelationBrick final : public Brick {
 public:
  explicit CrossCorrelationBrick(std::optional<int> n = std::nullopt) : n_(n) {
    if (n && *n < 1) throw error(errc::parameter, "cross-correlation length must be >= 1");
  }

  std::string_view kind() const override { return "cross_correlation"; }
  std::size_t arity() const override { return 2; }

  static int offset_of(std::size_t position, int n) { return static_cast<int>(position) - (n - 1); }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].dims.size() != 1 || !in[0].same_dims(in[1]))
      throw error(errc::shape, "cross-correlation takes two equal one-dimensional vectors, got " +
                                   dims_to_string(in[0].dims) + " and " + dims_to_string(in[1].dims));
    const int n = in[0].dims[0];
    if (n_ && *n_ != n)
      throw error(errc::shape, "cross-correlation configured for N=" + std::to_string(*n_) + " got length " +
                                   std::to_string(n));
    for (const auto& s : in)
      if (s.duration != Duration(1))
        throw error(errc::shape, "cross-correlation inputs must be presented in a single step");
    Resolution r;
    r.outputs = {PortShape{{2 * n - 1}, Coding::one_hot, Duration(1)}};
    r.metadata.t_out = Duration(1);
    r.metadata.depth = Depth::runtime();
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    const int n = in[0].dims[0];
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto& f = b.fragment;
    std::tie(b.begin, b.done) = add_control(f, r.metadata);

    std::vector<NeuronId> u, v;
    for (int i = 0; i < n; ++i) {
      u.push_back(f.add_neuron(NeuronParams{}, Role::internal, {}, "u[" + std::to_string(i) + "]"));
      v.push_back(f.add_neuron(NeuronParams{}, Role::internal, {}, "v[" + std::to_string(i) + "]"));
    }

    NeuronParams race;
    race.threshold = n - 0.5;
    race.decay = 0.0;
    race.reset = kFireOnceReset;
    auto out = make_output_port(f, r.outputs[0], race, "offset");

    NeuronParams coincidence;
    coincidence.threshold = 1.5;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        auto c = f.add_neuron(coincidence, Role::internal, {},
                              "coincide[" + std::to_string(i) + "," + std::to_string(j) + "]");
        f.add_synapse(u[i], c, 1.0, 1);
        f.add_synapse(v[j], c, 1.0, 1);
        f.add_synapse(c, out.neurons[static_cast<std::size_t>(j - i + n - 1)], 1.0, 1);
      }
    }

    // Pacemaker: first spike at t0 + 2, first +1 lands on the race at t0 + 4,
    // one step after the coincidence counts.
    auto pacer = f.add_neuron(NeuronParams{}, Role::internal, {}, "pacer");
    f.add_synapse(b.begin, pacer, 1.0, 2);
    f.add_synapse(pacer, pacer, 1.0, 1);
    for (const auto& o : out.neurons) {
      f.add_synapse(pacer, o, 1.0, 2);
      f.add_synapse(o, pacer, kInhibit, 1);
      f.add_synapse(o, b.done, 1.0, 1);
      for (const auto& rival : out.neurons)
        if (rival != o) f.add_synapse(o, rival, kInhibit, 1);
    }

    b.inputs.push_back(InputPort{in[0], u, 1});
    b.inputs.push_back(InputPort{in[1], v, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  std::optional<int> n_;
};

}  // namespace brickwork
