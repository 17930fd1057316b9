#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "brickwork/bricks/basic.hpp"
#include "brickwork/bricks/cross_correlation.hpp"
#include "brickwork/bricks/random_walk.hpp"
#include "brickwork/bricks/shortest_path.hpp"
#include "brickwork/error.hpp"
#include "brickwork/scaffold.hpp"
#include "brickwork/sim.hpp"

namespace brickwork::demo {

// Schedule that fires every set position of `bits` once, at step 0.
inline SpikeSchedule pattern_schedule(const std::vector<int>& bits) {
  SpikeSchedule s;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s.push_back({static_cast<int>(i), 0});
  return s;
}

inline BrickPtr pattern_input(const std::vector<int>& bits) {
  return std::make_shared<InputBrick>(PortShape{{static_cast<int>(bits.size())}, Coding::binary_vector, Duration(1)},
                                      pattern_schedule(bits));
}

// Positions of `port` that fired at any time in the raster.
inline std::vector<int> fired_lines(const Layout& layout, const SpikeRaster& raster, const std::string& brick,
                                    std::size_t port = 0) {
  const auto& neurons = layout.brick(brick).outputs.at(port).neurons;
  std::vector<int> out(neurons.size(), 0);
  for (std::size_t i = 0; i < neurons.size(); ++i) out[i] = raster.spikes(neurons[i]).empty() ? 0 : 1;
  return out;
}

inline SpikeRaster run_layout(const Layout& layout, int steps, std::uint64_t seed = 0) {
  Simulator sim(layout.circuit);
  sim.inject(layout.start, 0);
  SimulationConfig config;
  config.steps = steps;
  config.seed = seed;
  return sim.run(config);
}

// --- logic ---------------------------------------------------------------

inline Scaffold logic_scaffold(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty()) throw error(errc::parameter, "logic demo needs two equal, non-empty patterns");
  Scaffold s;
  s.add_brick("a", pattern_input(a));
  s.add_brick("b", pattern_input(b));
  s.add_brick("and", std::make_shared<LogicBrick>(LogicMode::and_, 2));
  s.add_brick("or", std::make_shared<LogicBrick>(LogicMode::or_, 2));
  for (const char* gate : {"and", "or"}) {
    s.connect("a", 0, gate, 0);
    s.connect("b", 0, gate, 1);
  }
  return s;
}

inline Scaffold logic_scaffold() { return logic_scaffold({1, 1, 0, 0}, {1, 0, 1, 0}); }

// --- shortest path -------------------------------------------------------

inline TargetGraph sample_graph() {
  TargetGraph g;
  g.nodes = 6;
  g.directed = false;
  g.edges = {{0, 1, 7}, {0, 2, 9}, {0, 5, 14}, {1, 2, 10}, {1, 3, 15}, {2, 3, 11}, {2, 5, 2}, {3, 4, 6}, {4, 5, 9}};
  return g;
}

inline Scaffold shortest_path_scaffold(const TargetGraph& g, int source, std::optional<int> horizon = std::nullopt) {
  if (source < 0 || source >= g.nodes) throw error(errc::parameter, "source node outside the graph");
  Scaffold s;
  s.add_brick("source", std::make_shared<InputBrick>(PortShape{{g.nodes}, Coding::one_hot, Duration(1)},
                                                     SpikeSchedule{{source, 0}}));
  s.add_brick("paths", std::make_shared<ShortestPathBrick>(g, horizon));
  s.connect("source", 0, "paths", 0);
  return s;
}

inline Scaffold shortest_path_scaffold() { return shortest_path_scaffold(sample_graph(), 0); }

// Distance per node from spike timing; empty for nodes silent in the raster.
inline std::vector<std::optional<int>> read_distances(const Layout& layout, const SpikeRaster& raster,
                                                      const std::string& brick = "paths") {
  const auto& nodes = layout.brick(brick).outputs.at(0).neurons;
  std::optional<int> origin;
  for (const auto& id : nodes)
    if (auto t = raster.first_spike(id)) origin = origin ? std::min(*origin, *t) : *t;
  std::vector<std::optional<int>> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (auto t = raster.first_spike(nodes[i])) out[i] = *t - *origin;
  return out;
}

// --- Nash equilibria of a two-player game --------------------------------

// payoff[i][j] for player 1 choosing i and player 2 choosing j.
struct Game {
  std::vector<std::vector<double>> payoff1;
  std::vector<std::vector<double>> payoff2;

  int rows() const { return static_cast<int>(payoff1.size()); }
  int cols() const { return payoff1.empty() ? 0 : static_cast<int>(payoff1[0].size()); }
};

// Cooperate = 0, defect = 1; T > R > P > S.
inline Game prisoners_dilemma() { return Game{{{3, 0}, {5, 1}}, {{3, 5}, {0, 1}}}; }

// Dense rank of `value` among `options`, best = 1.
inline int dense_rank(double value, std::vector<double> options) {
  std::sort(options.begin(), options.end(), std::greater<>());
  options.erase(std::unique(options.begin(), options.end()), options.end());
  return static_cast<int>(std::find(options.begin(), options.end(), value) - options.begin()) + 1;
}

// Three inputs over the (rows, cols) action-pair grid feed one 3-way AND.
// Each player presents, on line (i, j), the rank of its own action against
// the other's fixed action, as a spike at that many steps. A clock presents
// every line at step 1, so a pair neuron fires exactly when both players'
// actions are best responses: a pure Nash equilibrium.
inline Scaffold nash_scaffold(const Game& g) {
  const int r = g.rows(), c = g.cols();
  if (r < 1 || c < 1 || static_cast<int>(g.payoff2.size()) != r)
    throw error(errc::parameter, "game payoff matrices must be non-empty and equally sized");
  for (int i = 0; i < r; ++i)
    if (static_cast<int>(g.payoff1[i].size()) != c || static_cast<int>(g.payoff2[i].size()) != c)
      throw error(errc::parameter, "game payoff matrices must be rectangular");
  SpikeSchedule p1, p2, clock;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      std::vector<double> column, row;
      for (int k = 0; k < r; ++k) column.push_back(g.payoff1[k][j]);
      for (int k = 0; k < c; ++k) row.push_back(g.payoff2[i][k]);
      const int line = i * c + j;
      p1.push_back({line, dense_rank(g.payoff1[i][j], column)});
      p2.push_back({line, dense_rank(g.payoff2[i][j], row)});
      clock.push_back({line, 1});
    }
  }
  const PortShape shape{{r, c}, Coding::temporal_value, Duration(1)};
  Scaffold s;
  s.add_brick("player1", std::make_shared<InputBrick>(shape, p1));
  s.add_brick("player2", std::make_shared<InputBrick>(shape, p2));
  s.add_brick("clock", std::make_shared<InputBrick>(shape, clock));
  s.add_brick("pairs", std::make_shared<LogicBrick>(LogicMode::and_, 3));
  s.connect("player1", 0, "pairs", 0);
  s.connect("player2", 0, "pairs", 1);
  s.connect("clock", 0, "pairs", 2);
  return s;
}

inline Scaffold nash_scaffold() { return nash_scaffold(prisoners_dilemma()); }

// Action pairs (i, j) whose pair neuron fired.
inline std::vector<std::pair<int, int>> read_equilibria(const Layout& layout, const SpikeRaster& raster) {
  std::vector<std::pair<int, int>> out;
  const auto& port = layout.brick("pairs").outputs.at(0);
  for (const auto& id : port.neurons)
    if (!raster.spikes(id).empty()) {
      const auto& idx = layout.circuit.neuron(id).index;
      out.emplace_back(idx.at(0), idx.at(1));
    }
  return out;
}

// --- random walk ---------------------------------------------------------

// Uniform lattice walk: a 2-bit generator picks one of {+x, -x, +y, -y} every
// step and the tracker rings follow the applied commands.
inline Scaffold random_walk_scaffold(std::vector<int> rings = {16, 16}, double p = 0.5) {
  if (rings.size() != 2) throw error(errc::parameter, "random-walk demo tracks a square grid (two rings)");
  Scaffold s;
  s.add_brick("rng", std::make_shared<BinaryRngBrick>(2, p));
  s.add_brick("decoder", std::make_shared<BinaryToUnaryBrick>(2));
  s.add_brick("tracker", std::make_shared<GridTrackerBrick>(std::move(rings)));
  s.connect("rng", 0, "decoder", 0);
  s.connect("decoder", 0, "tracker", 0);
  return s;
}

// Steps needed to observe `walk_steps` applied commands.
inline int random_walk_horizon(const Layout& layout, int walk_steps) {
  return *layout.brick("tracker").begin_time + 2 + GridTrackerBrick::kCadence * walk_steps;
}

struct WalkTrace {
  // positions[a][n]: unwrapped displacement on axis a after n applied commands.
  std::vector<std::vector<int>> positions;
  // Cadence steps at which an axis ring did not show exactly one active neuron.
  int cardinality_violations = 0;
};

inline WalkTrace read_walk(const Layout& layout, const SpikeRaster& raster, int walk_steps,
                           const std::string& brick = "tracker") {
  const auto& tracker = layout.brick(brick);
  const int first = *tracker.begin_time + 1;
  WalkTrace w;
  for (const auto& ring : tracker.outputs) {
    const int m = static_cast<int>(ring.neurons.size());
    std::vector<int> pos;
    int unwrapped = 0, last = -1;
    for (int n = 0; n <= walk_steps; ++n) {
      const int t = first + GridTrackerBrick::kCadence * n;
      int active = -1, count = 0;
      for (int k = 0; k < m; ++k)
        if (raster.fired_at(ring.neurons[static_cast<std::size_t>(k)], t)) {
          active = k;
          ++count;
        }
      if (count != 1) {
        ++w.cardinality_violations;
        pos.push_back(unwrapped);
        continue;
      }
      if (last >= 0) {
        int step = ((active - last) % m + m) % m;
        if (step == m - 1) step = -1;
        unwrapped += step;
      }
      last = active;
      pos.push_back(unwrapped);
    }
    w.positions.push_back(std::move(pos));
  }
  return w;
}

// --- cross-correlation ---------------------------------------------------

inline Scaffold cross_correlation_scaffold(const std::vector<int>& u, const std::vector<int>& v) {
  if (u.size() != v.size() || u.empty()) throw error(errc::parameter, "cross-correlation demo needs equal, non-empty vectors");
  Scaffold s;
  s.add_brick("u", pattern_input(u));
  s.add_brick("v", pattern_input(v));
  s.add_brick("xcorr", std::make_shared<CrossCorrelationBrick>(static_cast<int>(u.size())));
  s.connect("u", 0, "xcorr", 0);
  s.connect("v", 0, "xcorr", 1);
  return s;
}

inline Scaffold cross_correlation_scaffold() { return cross_correlation_scaffold({1, 0, 1, 1, 0}, {0, 1, 0, 1, 1}); }

// Offsets s = j - i whose output neuron fired.
inline std::vector<int> read_offsets(const Layout& layout, const SpikeRaster& raster, const std::string& brick = "xcorr") {
  const auto& neurons = layout.brick(brick).outputs.at(0).neurons;
  const int n = (static_cast<int>(neurons.size()) + 1) / 2;
  std::vector<int> out;
  for (std::size_t k = 0; k < neurons.size(); ++k)
    if (!raster.spikes(neurons[k]).empty()) out.push_back(CrossCorrelationBrick::offset_of(k, n));
  return out;
}

// --- registry ------------------------------------------------------------

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"logic", "shortest-path", "nash", "random-walk", "cross-correlation"};
  return names;
}

inline Scaffold demo_scaffold(const std::string& name) {
  if (name == "logic") return logic_scaffold();
  if (name == "shortest-path") return shortest_path_scaffold();
  if (name == "nash") return nash_scaffold();
  if (name == "random-walk") return random_walk_scaffold();
  if (name == "cross-correlation") return cross_correlation_scaffold();
  throw error(errc::parameter, "unknown demo '" + name + "'");
}

namespace detail {

inline std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
  return s;
}

}  // namespace detail

// Lays out and runs a demo, then describes the decoded result.
inline std::string run_demo(const std::string& name, std::uint64_t seed = 0) {
  const Layout layout = lay_bricks(demo_scaffold(name));
  std::ostringstream out;
  out << name << ": " << layout.circuit.neuron_count() << " neurons, " << layout.circuit.synapse_count()
      << " synapses\n";
  if (name == "logic") {
    auto raster = run_layout(layout, 16, seed);
    out << "a       = 1 1 0 0\nb       = 1 0 1 0\n";
    out << "a AND b = " << detail::join(fired_lines(layout, raster, "and")) << "\n";
    out << "a OR b  = " << detail::join(fired_lines(layout, raster, "or")) << "\n";
  } else if (name == "shortest-path") {
    const auto g = sample_graph();
    auto raster = run_layout(layout, 8 + (g.nodes - 1) * g.max_weight() + 4, seed);
    auto dist = read_distances(layout, raster);
    for (std::size_t v = 0; v < dist.size(); ++v)
      out << "dist(0, " << v << ") = " << (dist[v] ? std::to_string(*dist[v]) : std::string("unreachable")) << "\n";
  } else if (name == "nash") {
    auto raster = run_layout(layout, 12, seed);
    const char* action[] = {"cooperate", "defect"};
    for (auto [i, j] : read_equilibria(layout, raster))
      out << "equilibrium: player1 " << action[i] << ", player2 " << action[j] << "\n";
  } else if (name == "random-walk") {
    const int steps = 50;
    auto raster = run_layout(layout, random_walk_horizon(layout, steps), seed);
    auto walk = read_walk(layout, raster, steps);
    out << "seed " << seed << ", " << steps << " steps\n";
    for (int n = 0; n <= steps; n += 10)
      out << "step " << n << ": (" << walk.positions[0][static_cast<std::size_t>(n)] << ", "
          << walk.positions[1][static_cast<std::size_t>(n)] << ")\n";
  } else if (name == "cross-correlation") {
    auto raster = run_layout(layout, 24, seed);
    out << "u = 1 0 1 1 0\nv = 0 1 0 1 1\n";
    out << "argmax offsets (v shifted by s against u): " << detail::join(read_offsets(layout, raster)) << "\n";
  }
  return out.str();
}

}  // namespace brickwork::demo
