#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brickwork/brick.hpp"

namespace brickwork {

struct GraphEdge {
  int u = 0;
  int v = 0;
  int weight = 1;
};

struct TargetGraph {
  int nodes = 0;
  std::vector<GraphEdge> edges;
  bool directed = false;

  int max_weight() const {
    int w = 1;
    for (const auto& e : edges) w = std::max(w, e.weight);
    return w;
  }
};

inline void validate_graph(const TargetGraph& g) {
  if (g.nodes < 1) throw error(errc::parameter, "target graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    std::string where = "edge " + std::to_string(e.u) + "-" + std::to_string(e.v);
    if (e.u < 0 || e.u >= g.nodes || e.v < 0 || e.v >= g.nodes)
      throw error(errc::parameter, where + " references a node outside [0, " + std::to_string(g.nodes) + ")");
    if (e.u == e.v) throw error(errc::parameter, where + " is a self-edge");
    if (e.weight < 1) throw error(errc::parameter, where + " has weight < 1");
    auto key = g.directed ? std::pair{e.u, e.v} : std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second) throw error(errc::parameter, where + " is listed twice");
  }
}

// Edge-list document: a `directed` or `undirected` header (optionally followed
// by the node count), then one `u v w` triple per line. `#` starts a comment.
// Nodes are 0-based integers; the count defaults to one past the largest id.
inline TargetGraph parse_target_graph(std::string_view text) {
  TargetGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  int declared = -1;
  int largest = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    auto fail = [&](const std::string& why) {
      throw error(errc::parse, "graph line " + std::to_string(line_no) + ": " + why);
    };
    if (!header) {
      if (first == "directed") g.directed = true;
      else if (first == "undirected") g.directed = false;
      else fail("expected 'directed' or 'undirected' header, got '" + first + "'");
      header = true;
      if (int n; fields >> n) declared = n;
      continue;
    }
    GraphEdge e;
    try {
      e.u = std::stoi(first);
    } catch (const std::exception&) {
      fail("bad node id '" + first + "'");
    }
    if (!(fields >> e.v >> e.weight)) fail("expected 'u v w'");
    if (std::string extra; fields >> extra) fail("trailing field '" + extra + "'");
    largest = std::max({largest, e.u, e.v});
    g.edges.push_back(e);
  }
  if (!header) throw error(errc::parse, "graph document is missing its directed/undirected header");
  g.nodes = std::max(declared, largest + 1);
  try {
    validate_graph(g);
  } catch (const error& e) {
    throw error(errc::parse, e.what());
  }
  return g;
}

// Spike-timing shortest paths. One fire-once neuron per node, one synapse per
// edge (both directions when undirected) whose delay is the edge weight. The
// one-hot input selects the source; each node's first spike trails the
// source's by its distance. `done` follows the source spike by the horizon.
class ShortestPathBrick final : public Brick {
 public:
  explicit ShortestPathBrick(TargetGraph graph, std::optional<int> horizon = std::nullopt)
      : graph_(std::move(graph)) {
    validate_graph(graph_);
    horizon_ = horizon.value_or((graph_.nodes - 1) * graph_.max_weight() + 1);
    if (horizon_ < 1) throw error(errc::parameter, "shortest-path horizon must be >= 1");
  }

  std::string_view kind() const override { return "shortest_path"; }
  std::size_t arity() const override { return 1; }
  const TargetGraph& graph() const noexcept { return graph_; }
  int horizon() const noexcept { return horizon_; }

 protected:
  Resolution do_resolve(std::span<const PortShape> in) const override {
    if (in[0].size() != static_cast<std::size_t>(graph_.nodes))
      throw error(errc::shape, "shortest path over " + std::to_string(graph_.nodes) + " nodes got source shape " +
                                   dims_to_string(in[0].dims));
    Resolution r;
    r.outputs = {PortShape{{graph_.nodes}, Coding::temporal_value, Duration(horizon_)}};
    r.metadata.t_out = Duration(horizon_);
    r.metadata.depth = Depth::runtime();
    return r;
  }

  BuiltBrick do_build(std::span<const PortShape> in, const Resolution& r, const Namer& namer) const override {
    BuiltBrick b{namer.fragment(), {}, {}, {}, {}, {}};
    auto& f = b.fragment;
    std::tie(b.begin, b.done) = add_control(f, r.metadata);
    NeuronParams node;
    node.decay = 0.0;
    node.reset = kFireOnceReset;
    auto out = make_output_port(f, r.outputs[0], node, "node");
    for (const auto& e : graph_.edges) {
      f.add_synapse(out.neurons[static_cast<std::size_t>(e.u)], out.neurons[static_cast<std::size_t>(e.v)], 1.0, e.weight);
      if (!graph_.directed)
        f.add_synapse(out.neurons[static_cast<std::size_t>(e.v)], out.neurons[static_cast<std::size_t>(e.u)], 1.0,
                      e.weight);
    }
    NeuronParams first;
    first.decay = 0.0;
    first.reset = kFireOnceReset;
    auto source_seen = f.add_neuron(first, Role::internal, {}, "source_seen");
    for (const auto& id : out.neurons) f.add_synapse(id, source_seen, 1.0, 1);
    f.add_synapse(source_seen, b.done, 1.0, horizon_);
    b.inputs.push_back(InputPort{in[0], out.neurons, 1});
    b.outputs.push_back(std::move(out));
    return b;
  }

 private:
  TargetGraph graph_;
  int horizon_ = 1;
};

}  // namespace brickwork
