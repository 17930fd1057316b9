#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "brickwork/brick.hpp"
#include "brickwork/sim.hpp"

namespace testing_support {

using namespace brickwork;

// A brick built on its own and wrapped in a harness. The `go` neuron fires at
// step 0, so begin fires at 1 (= t0) and a source injected at t0 delivers like
// an upstream output emitted alongside begin.
struct Bench {
  BuiltBrick built;
  Harness harness;
  static constexpr int t0 = 1;

  Bench(const Brick& brick, std::vector<PortShape> shapes, const std::string& tag = "dut")
      : built(brick.build(shapes, Namer("main", tag))), harness(make_harness(built)) {}

  // spikes[port] = list of (line, t) injections at absolute times.
  SpikeRaster run(const std::vector<std::vector<std::pair<int, int>>>& spikes, int steps, std::uint64_t seed = 0) const {
    Simulator sim(harness.circuit);
    sim.inject(harness.go, 0);
    for (std::size_t p = 0; p < spikes.size(); ++p)
      for (auto [line, t] : spikes[p]) sim.inject(harness.sources.at(p).at(static_cast<std::size_t>(line)), t);
    SimulationConfig config;
    config.steps = steps;
    config.seed = seed;
    return sim.run(config);
  }

  // Pattern presented in a single step at t0 on each port.
  SpikeRaster present(const std::vector<std::vector<int>>& patterns, int steps) const {
    std::vector<std::vector<std::pair<int, int>>> spikes(patterns.size());
    for (std::size_t p = 0; p < patterns.size(); ++p)
      for (std::size_t i = 0; i < patterns[p].size(); ++i)
        if (patterns[p][i]) spikes[p].push_back({static_cast<int>(i), t0});
    return run(spikes, steps);
  }

  const std::vector<NeuronId>& out(std::size_t port = 0) const { return built.outputs.at(port).neurons; }

  // (line, t) output events on a port, in time then line order.
  std::vector<std::pair<int, int>> output_events(const SpikeRaster& r, std::size_t port = 0) const {
    std::vector<std::pair<int, int>> ev;
    const auto& ids = out(port);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (int t : r.spikes(ids[i])) ev.push_back({t, static_cast<int>(i)});
    std::sort(ev.begin(), ev.end());
    std::vector<std::pair<int, int>> res;
    for (auto [t, i] : ev) res.push_back({i, t});
    return res;
  }
};

inline PortShape vec(int n, int duration = 1, Coding coding = Coding::binary_vector) {
  return PortShape{{n}, coding, Duration(duration)};
}

inline std::vector<int> bits_of(unsigned word, int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (word >> i) & 1;
  return out;
}

// Multiple of 1/4 in [lo, hi].
inline double quarter(std::mt19937_64& rng, int lo4, int hi4) {
  return std::uniform_int_distribution<int>(lo4, hi4)(rng) / 4.0;
}

// Random circuit of up to `max_neurons` neurons with dyadic parameters so
// every arrival sum is exact. The first one or two neurons are input-tagged.
inline Circuit random_circuit(std::mt19937_64& rng, int max_neurons) {
  Circuit c;
  const int n = std::uniform_int_distribution<int>(2, max_neurons)(rng);
  std::vector<NeuronId> ids;
  for (int i = 0; i < n; ++i) {
    NeuronParams p;
    p.threshold = quarter(rng, 1, 12);
    p.reset = quarter(rng, -4, 2);
    p.decay = quarter(rng, 0, 4);
    const double probs[] = {1.0, 1.0, 0.75, 0.5, 0.25};
    p.p_fire = probs[std::uniform_int_distribution<int>(0, 4)(rng)];
    p.initial_voltage = quarter(rng, -2, 4);
    ids.push_back(c.add_neuron(p, i < 2 ? Role::input : Role::internal, {}, "n" + std::to_string(i), "rand"));
  }
  std::bernoulli_distribution edge(0.35);
  for (const auto& a : ids)
    for (const auto& b : ids)
      if (edge(rng)) c.add_synapse(a, b, quarter(rng, -8, 12), std::uniform_int_distribution<int>(1, 5)(rng));
  return c;
}

}  // namespace testing_support
