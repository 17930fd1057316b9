#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "brickwork/circuit.hpp"
#include "brickwork/error.hpp"

namespace brickwork {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Stable 64-bit key for a neuron id (FNV-1a); independent of std::hash.
constexpr std::uint64_t neuron_key(std::string_view id) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Bernoulli(p) draw for one threshold crossing. The stream is a pure function
// of (seed, neuron, timestep), so replays and evaluation order never matter.
constexpr bool stochastic_draw(double p, std::uint64_t seed, std::uint64_t neuron, std::int64_t t) noexcept {
  if (p >= 1.0) return true;
  std::uint64_t x = detail::splitmix64(seed);
  x = detail::splitmix64(x ^ neuron);
  x = detail::splitmix64(x ^ static_cast<std::uint64_t>(t));
  double u = static_cast<double>(x >> 11) * 0x1.0p-53;
  return u < p;
}

struct Injection {
  NeuronId neuron;
  int t = 0;
};

struct SimulationConfig {
  int steps = 1;
  std::uint64_t seed = 0;
  // Which neurons appear in the raster; all when empty.
  std::function<bool(const Neuron&)> record;
  // Neurons whose end-of-step voltage is traced.
  std::vector<NeuronId> trace;
};

struct SpikeEvent {
  int t;
  NeuronId neuron;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
  friend auto operator<=>(const SpikeEvent&, const SpikeEvent&) = default;
};

class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(int steps, std::vector<SpikeEvent> events) : steps_(steps), events_(std::move(events)) {
    std::sort(events_.begin(), events_.end());
    for (const auto& e : events_) by_neuron_[e.neuron].push_back(e.t);
  }

  int steps() const noexcept { return steps_; }
  const std::vector<SpikeEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::span<const int> spikes(const NeuronId& id) const {
    auto it = by_neuron_.find(id);
    if (it == by_neuron_.end()) return {};
    return it->second;
  }
  std::optional<int> first_spike(const NeuronId& id) const {
    auto s = spikes(id);
    if (s.empty()) return std::nullopt;
    return s.front();
  }
  bool fired_at(const NeuronId& id, int t) const {
    auto s = spikes(id);
    return std::binary_search(s.begin(), s.end(), t);
  }
  const std::map<NeuronId, std::vector<int>>& by_neuron() const noexcept { return by_neuron_; }

  const std::vector<double>& voltage_trace(const NeuronId& id) const { return traces_.at(id); }
  const std::set<std::string>& ignored_attributes() const noexcept { return ignored_; }

  friend bool operator==(const SpikeRaster& a, const SpikeRaster& b) {
    return a.steps_ == b.steps_ && a.events_ == b.events_;
  }

 private:
  friend class Simulator;
  int steps_ = 0;
  std::vector<SpikeEvent> events_;
  std::map<NeuronId, std::vector<int>> by_neuron_;
  std::map<NeuronId, std::vector<double>> traces_;
  std::set<std::string> ignored_;
};

// Discrete-time LIF reference simulator. Per step t and neuron j:
//   V^_j(t) = sum of arrivals due at t + V_j(t-1)
//   crossed: V^ > threshold (or an injection at t); f_j(t) = Bernoulli(p), V_j = reset
//   otherwise: V_j = (1 - decay) * V^, f_j(t) = 0
// and every spike schedules arrivals at t + delay on outgoing synapses.
// A crossing whose Bernoulli draw comes up 0 still resets.
//
// The compiled network is immutable; run() is const and safe to call
// concurrently. Injections are per-simulator configuration.
class Simulator {
 public:
  explicit Simulator(const Circuit& circuit) {
    require_valid(circuit);
    ids_.reserve(circuit.neuron_count());
    for (const auto& [id, n] : circuit.neurons()) {
      index_.emplace(id, ids_.size());
      ids_.push_back(id);
      neurons_.push_back(n);
      keys_.push_back(neuron_key(id));
      for (const auto& [k, _] : n.attrs) ignored_.insert(k);
    }
    out_.resize(ids_.size());
    for (const auto& [key, s] : circuit.synapses()) {
      out_[index_.at(s.pre)].push_back({index_.at(s.post), s.weight, s.delay});
      max_delay_ = std::max(max_delay_, s.delay);
      for (const auto& [k, _] : s.attrs) ignored_.insert(k);
    }
  }

  // Drives `neuron` suprathreshold at step t. Only input-tagged neurons accept drive.
  void inject(const NeuronId& neuron, int t) {
    auto it = index_.find(neuron);
    if (it == index_.end()) throw error(errc::injection, "unknown injection target '" + neuron + "'");
    if (neurons_[it->second].role != Role::input)
      throw error(errc::injection, "injection target '" + neuron + "' is not input-tagged");
    if (t < 0) throw error(errc::injection, "injection time must be >= 0");
    injections_.emplace(t, it->second);
  }
  void inject(std::span<const Injection> schedule) {
    for (const auto& i : schedule) inject(i.neuron, i.t);
  }

  SpikeRaster run(const SimulationConfig& config) const {
    if (config.steps < 1) throw error(errc::parameter, "simulation horizon must be >= 1");
    const std::size_t n = ids_.size();
    const std::size_t ring = static_cast<std::size_t>(max_delay_) + 1;

    std::vector<double> voltage(n);
    for (std::size_t j = 0; j < n; ++j) voltage[j] = neurons_[j].params.initial_voltage;
    std::vector<double> pending(ring * n, 0.0);
    std::vector<char> recorded(n, 1);
    if (config.record)
      for (std::size_t j = 0; j < n; ++j) recorded[j] = config.record(neurons_[j]) ? 1 : 0;

    std::vector<std::pair<std::size_t, std::vector<double>*>> traced;
    SpikeRaster raster;
    for (const auto& id : config.trace) {
      auto it = index_.find(id);
      if (it == index_.end()) throw error(errc::missing_neuron, "cannot trace unknown neuron '" + id + "'");
      auto& v = raster.traces_[id];
      v.reserve(static_cast<std::size_t>(config.steps));
      traced.emplace_back(it->second, &v);
    }

    std::vector<char> forced(n, 0);
    std::vector<std::size_t> fired;
    std::vector<SpikeEvent> events;
    auto inj = injections_.begin();
    for (int t = 0; t < config.steps; ++t) {
      while (inj != injections_.end() && inj->first < t) ++inj;
      std::vector<std::size_t> forced_now;
      for (; inj != injections_.end() && inj->first == t; ++inj) {
        forced[inj->second] = 1;
        forced_now.push_back(inj->second);
      }

      double* due = pending.data() + (static_cast<std::size_t>(t) % ring) * n;
      fired.clear();
      for (std::size_t j = 0; j < n; ++j) {
        const NeuronParams& p = neurons_[j].params;
        const double vhat = due[j] + voltage[j];
        due[j] = 0.0;
        if (vhat > p.threshold || forced[j]) {
          voltage[j] = p.reset;
          if (stochastic_draw(p.p_fire, config.seed, keys_[j], t)) fired.push_back(j);
        } else {
          voltage[j] = (1.0 - p.decay) * vhat;
        }
      }
      for (std::size_t j : forced_now) forced[j] = 0;

      for (std::size_t j : fired) {
        for (const auto& e : out_[j]) {
          std::size_t slot = (static_cast<std::size_t>(t) + static_cast<std::size_t>(e.delay)) % ring;
          pending[slot * n + e.target] += e.weight;
        }
        if (recorded[j]) events.push_back({t, ids_[j]});
      }
      for (auto& [j, v] : traced) v->push_back(voltage[j]);
    }

    SpikeRaster result(config.steps, std::move(events));
    result.traces_ = std::move(raster.traces_);
    result.ignored_ = ignored_;
    return result;
  }

  std::size_t size() const noexcept { return ids_.size(); }

 private:
  struct Edge {
    std::size_t target;
    double weight;
    int delay;
  };

  std::vector<NeuronId> ids_;
  std::vector<Neuron> neurons_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<NeuronId, std::size_t> index_;
  std::vector<std::vector<Edge>> out_;
  int max_delay_ = 1;
  std::multimap<int, std::size_t> injections_;
  std::set<std::string> ignored_;
};

inline SpikeRaster simulate(const Circuit& circuit, const SimulationConfig& config,
                            std::span<const Injection> schedule = {}) {
  Simulator sim(circuit);
  sim.inject(schedule);
  return sim.run(config);
}

}  // namespace brickwork
