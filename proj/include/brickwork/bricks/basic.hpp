#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brickwork/brick.hpp"

namespace brickwork {

struct ScheduledSpike {
  int line = 0;  // row-major position within the port
  int t = 0;     // steps after presentation

  friend auto operator<=>(const ScheduledSpike&, const ScheduledSpike&) = default;
};

using SpikeSchedule = std::vector<ScheduledSpike>;

// Source brick replaying a fixed spike schedule. Line i spikes at
// begin + 1 + s for every scheduled (i, s), so depth is 1.
class InputBrick final : public Brick {
 public:
  InputBrick(PortShape shape, SpikeSchedule schedule) : shape_(std::move(shape)) {
    check_shape(shape_, "input");
    for (const auto& e : schedule) {
      if (e.line < 0 || static_cast<std::size_t>(e.line) >= shape_.size())
        throw error(errc::parameter, "input schedule line " + std::to_string(e.line) + " outside shape " +
                                         dims_to_string(shape_.dims));
      if (e.t < 0) throw error(errc::parameter, "input schedule times must be >= 0");
    }
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
    schedule_ = std::move(schedule);
    int last = 0;
    for (const auto& e : schedule_) last = std::max(last, e.t);
    shape_.duration = Duration(last + 1);
  }

  std::string_view kind() const override { return "input"; }
  std::size_t arity() const override { return 0; }
  const SpikeSchedule& schedule() const noexcept { return schedule_; }
  const PortShape& shape() const noexcept { return shape_; }

 protected:
  Resolution do_resolve(std::span<const PortShape>) const override {
    Resolution r;
    r.outputs = {shape_};
    r.metadata.t_out = shape_.duration;
    r.metadata.depth = Depth(1);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape>, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto [begin, done] = add_control(b.fragment, r.metadata);
    b.begin = begin;
    b.done = done;
    auto out = make_output_port(b.fragment, shape_, NeuronParams{}, "out");
    std::map<int, std::vector<int>> by_line;
    for (const auto& e : schedule_) by_line[e.line].push_back(e.t);
    for (const auto& [line, times] : by_line) {
      const auto& target = out.neurons[static_cast<std::size_t>(line)];
      b.fragment.add_synapse(begin, target, 1.0, times.front() + 1);
      // Later spikes on the same line need their own presynaptic relay.
      for (std::size_t k = 1; k < times.size(); ++k) {
        auto relay = b.fragment.add_neuron(NeuronParams{}, Role::internal, {},
                                           "emit[" + std::to_string(line) + "]@" + std::to_string(times[k]));
        b.fragment.add_synapse(begin, relay, 1.0, times[k]);
        b.fragment.add_synapse(relay, target, 1.0, 1);
      }
    }
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  PortShape shape_;
  SpikeSchedule schedule_;
};

enum class LogicMode { and_, or_ };

// Elementwise k-input AND/OR. One full-leak neuron per line; the AND threshold
// sits half a unit below k so the strict crossing test fires on exactly k
// coincident inputs, OR fires on any input.
class LogicBrick final : public Brick {
 public:
  LogicBrick(LogicMode mode, std::size_t arity) : mode_(mode), arity_(arity) {
    if (arity < 2) throw error(errc::parameter, "logic bricks need at least 2 inputs");
  }

  std::string_view kind() const override { return mode_ == LogicMode::and_ ? "and" : "or"; }
  std::size_t arity() const override { return arity_; }
  LogicMode mode() const noexcept { return mode_; }

  double threshold() const noexcept {
    return mode_ == LogicMode::and_ ? static_cast<double>(arity_) - 0.5 : 0.5;
  }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    Duration t = in[0].duration;
    for (std::size_t p = 1; p < in.size(); ++p) {
      if (!in[p].same_dims(in[0]))
        throw error(errc::shape, std::string(kind()) + " requires equal input shapes, got " + dims_to_string(in[0].dims) +
                                     " and " + dims_to_string(in[p].dims));
      t = longest(t, in[p].duration);
    }
    Resolution r;
    r.outputs = {PortShape{in[0].dims, in[0].coding, t}};
    r.metadata.t_out = t;
    r.metadata.depth = Depth(1);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    std::tie(b.begin, b.done) = add_control(b.fragment, r.metadata);
    NeuronParams gate;
    gate.threshold = threshold();
    gate.decay = 1.0;
    auto out = make_output_port(b.fragment, r.outputs[0], gate, "out");
    for (const auto& shape : in) b.inputs.push_back(InputPort{shape, out.neurons, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  LogicMode mode_;
  std::size_t arity_;
};

// Shifts every line by exactly `steps`: one relay per line, reached through an
// upstream synapse of delay `steps`.
class DelayBrick final : public Brick {
 public:
  explicit DelayBrick(int steps) : steps_(steps) {
    if (steps < 1) throw error(errc::parameter, "delay must be >= 1, got " + std::to_string(steps));
  }

  std::string_view kind() const override { return "delay"; }
  std::size_t arity() const override { return 1; }
  int steps() const noexcept { return steps_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    Resolution r;
    r.outputs = {in[0]};
    r.metadata.t_out = in[0].duration;
    r.metadata.depth = Depth(steps_);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    std::tie(b.begin, b.done) = add_control(b.fragment, r.metadata);
    auto out = make_output_port(b.fragment, r.outputs[0], NeuronParams{}, "relay");
    b.inputs.push_back(InputPort{in[0], out.neurons, steps_});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  int steps_;
};

// Passes a single temporal value v through iff v <= reference. The gate is a
// non-leaky fire-once neuron; a deadline spike from begin lands at
// t0 + reference + 2 with a large negative weight and shuts it for good.
// Output keeps temporal coding: value v leaves at t0 + 1 + v.
class ThresholdBrick final : public Brick {
 public:
  explicit ThresholdBrick(int reference) : reference_(reference) {
    if (reference < 0) throw error(errc::parameter, "threshold reference must be >= 0");
  }

  std::string_view kind() const override { return "threshold"; }
  std::size_t arity() const override { return 1; }
  int reference() const noexcept { return reference_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].size() != 1)
      throw error(errc::shape, "threshold takes one temporal channel, got " + dims_to_string(in[0].dims));
    Resolution r;
    r.outputs = {PortShape{{1}, Coding::temporal_value, Duration(reference_ + 1)}};
    r.metadata.t_out = r.outputs[0].duration;
    r.metadata.depth = Depth(1);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    std::tie(b.begin, b.done) = add_control(b.fragment, r.metadata);
    NeuronParams gate;
    gate.decay = 0.0;
    gate.reset = kFireOnceReset;
    auto out = make_output_port(b.fragment, r.outputs[0], gate, "gate");
    b.fragment.add_synapse(b.begin, out.neurons[0], kInhibit, reference_ + 2);
    b.inputs.push_back(InputPort{in[0], out.neurons, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  int reference_;
};

// First-come-first-serve minimum over k temporal channels. Each relay forwards
// its channel once and inhibits every rival with weight -k one step later;
// relays do not leak, so inhibition is permanent. Simultaneous earliest
// spikes all fire.
class MinimumBrick final : public Brick {
 public:
  explicit MinimumBrick(std::size_t channels) : channels_(channels) {
    if (channels < 1) throw error(errc::parameter, "minimum needs at least one channel");
  }

  std::string_view kind() const override { return "minimum"; }
  std::size_t arity() const override { return 1; }
  std::size_t channels() const noexcept { return channels_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].size() != channels_)
      throw error(errc::shape, "minimum over " + std::to_string(channels_) + " channels got shape " +
                                   dims_to_string(in[0].dims));
    Resolution r;
    r.outputs = {PortShape{{static_cast<int>(channels_)}, Coding::one_hot, in[0].duration}};
    r.metadata.t_out = in[0].duration;
    r.metadata.depth = Depth(1);
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    std::tie(b.begin, b.done) = add_control(b.fragment, r.metadata);
    NeuronParams relay;
    relay.decay = 0.0;
    relay.reset = kFireOnceReset;
    auto out = make_output_port(b.fragment, r.outputs[0], relay, "relay");
    const double w = -static_cast<double>(channels_);
    for (std::size_t i = 0; i < channels_; ++i)
      for (std::size_t j = 0; j < channels_; ++j)
        if (i != j) b.fragment.add_synapse(out.neurons[i], out.neurons[j], w, 1);
    b.inputs.push_back(InputPort{in[0], out.neurons, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  std::size_t channels_;
};

// Holds a single-step pattern until released. Per line a self-exciting latch
// remembers whether the line spiked; the release spike opens one AND gate per
// line and silences the latches. Port 0 carries data, port 1 the release.
// A release spike emitted at t yields the latched pattern at t + kReleaseLatency.
class BufferBrick final : public Brick {
 public:
  static constexpr int kReleaseLatency = 2;

  std::string_view kind() const override { return "buffer"; }
  std::size_t arity() const override { return 2; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].duration != Duration(1))
      throw error(errc::unsupported_buffer, "buffers hold single-step ports only, upstream lasts " +
                                                to_string(in[0].duration) + " steps");
    if (in[1].size() != 1) throw error(errc::shape, "buffer release port must be a single line");
    Resolution r;
    r.outputs = {in[0]};
    r.metadata.t_out = Duration(1);
    r.metadata.depth = Depth::runtime();
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    std::tie(b.begin, b.done) = add_control(b.fragment, r.metadata);
    NeuronParams gate;
    gate.threshold = 1.5;
    auto out = make_output_port(b.fragment, r.outputs[0], gate, "gate");
    auto release = b.fragment.add_neuron(NeuronParams{}, Role::internal, {}, "release");
    NeuronParams latch;
    latch.decay = 0.0;
    std::vector<NeuronId> latches;
    for (std::size_t i = 0; i < out.neurons.size(); ++i) {
      auto l = b.fragment.add_neuron(latch, Role::internal, {}, "latch[" + std::to_string(i) + "]");
      b.fragment.add_synapse(l, l, 1.0, 1);
      b.fragment.add_synapse(l, out.neurons[i], 1.0, 1);
      b.fragment.add_synapse(release, out.neurons[i], 1.0, 1);
      b.fragment.add_synapse(release, l, kInhibit, 1);
      latches.push_back(l);
    }
    b.fragment.add_synapse(release, b.done, 1.0, kReleaseLatency);
    b.inputs.push_back(InputPort{in[0], std::move(latches), 1});
    b.inputs.push_back(InputPort{in[1], {release}, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }
};

}  // namespace brickwork
