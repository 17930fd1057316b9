#include <gtest/gtest.h>

#include <random>

#include "brickwork/brickwork.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace brickwork;
using testing_support::Bench;
using testing_support::vec;

namespace {

TargetGraph to_target(int n, const std::vector<oracle::Edge>& edges, bool directed) {
  TargetGraph g;
  g.nodes = n;
  g.directed = directed;
  for (const auto& e : edges) g.edges.push_back({e.u, e.v, e.w});
  return g;
}

// Spike-time distances from `source` after running to the brick's done.
std::vector<std::optional<int>> distances(const ShortestPathBrick& brick, int source, SpikeRaster* keep = nullptr) {
  const int n = brick.graph().nodes;
  Bench bench(brick, {vec(n, 1, Coding::one_hot)});
  auto r = bench.run({{{source, Bench::t0}}}, Bench::t0 + brick.horizon() + 6);
  const auto& nodes = bench.out();
  const int origin = *r.first_spike(nodes[static_cast<std::size_t>(source)]);
  std::vector<std::optional<int>> out;
  for (const auto& id : nodes) {
    auto s = r.spikes(id);
    EXPECT_LE(s.size(), 1u) << "fire-once violated";
    out.push_back(s.empty() ? std::nullopt : std::optional<int>(s[0] - origin));
  }
  auto done = r.spikes(bench.built.done);
  EXPECT_EQ(done.size(), 1u);
  if (!done.empty()) {
    EXPECT_EQ(done[0], origin + 1 + brick.horizon());
  }
  if (keep) *keep = r;
  return out;
}

}  // namespace

TEST(ShortestPath, PathOfTwoEdges) {
  TargetGraph g{3, {{0, 1, 2}, {1, 2, 3}}, false};
  ShortestPathBrick brick(g);
  auto d = distances(brick, 0);
  EXPECT_EQ(d, (std::vector<std::optional<int>>{0, 2, 5}));
}

TEST(ShortestPath, SourceIsDistanceZero) {
  TargetGraph g{2, {{0, 1, 4}}, false};
  ShortestPathBrick brick(g);
  EXPECT_EQ(distances(brick, 1)[1], std::optional<int>(0));
}

TEST(ShortestPath, DisconnectedNodeSilent) {
  TargetGraph g{4, {{0, 1, 1}, {1, 2, 1}}, false};
  ShortestPathBrick brick(g);
  auto d = distances(brick, 0);
  EXPECT_FALSE(d[3].has_value());
}

TEST(ShortestPath, DirectedEdgesOneWay) {
  TargetGraph g{3, {{0, 1, 2}, {2, 1, 1}}, true};
  ShortestPathBrick brick(g);
  auto d = distances(brick, 0);
  EXPECT_EQ(d, (std::vector<std::optional<int>>{0, 2, std::nullopt}));
}

TEST(ShortestPath, NeuronParameters) {
  TargetGraph g{2, {{0, 1, 3}}, false};
  ShortestPathBrick brick(g);
  auto built = brick.build(std::vector<PortShape>{vec(2, 1, Coding::one_hot)}, Namer("main", "sp"));
  for (const auto& id : built.outputs[0].neurons) {
    const auto& p = built.fragment.neuron(id).params;
    EXPECT_EQ(p.threshold, 0.5);
    EXPECT_EQ(p.decay, 0.0);
    EXPECT_EQ(p.reset, -1e9);
  }
  EXPECT_EQ(built.fragment.synapse(built.outputs[0].neurons[0], built.outputs[0].neurons[1]).delay, 3);
  EXPECT_EQ(built.fragment.synapse(built.outputs[0].neurons[1], built.outputs[0].neurons[0]).delay, 3);
  EXPECT_TRUE(built.metadata.depth.is_runtime());
  EXPECT_EQ(brick.horizon(), 1 * 3 + 1);
}

TEST(ShortestPath, MalformedGraphs) {
  auto code = [](TargetGraph g) {
    try {
      ShortestPathBrick b(g);
    } catch (const error& e) {
      return e.code();
    }
    return errc::build;
  };
  EXPECT_EQ(code({2, {{0, 0, 1}}, false}), errc::parameter);
  EXPECT_EQ(code({2, {{0, 1, 0}}, false}), errc::parameter);
  EXPECT_EQ(code({2, {{0, 2, 1}}, false}), errc::parameter);
  EXPECT_EQ(code({2, {{0, 1, 1}, {1, 0, 2}}, false}), errc::parameter);
  EXPECT_EQ(code({0, {}, false}), errc::parameter);
  EXPECT_NO_THROW(ShortestPathBrick(TargetGraph{2, {{0, 1, 1}, {1, 0, 2}}, true}));
}

TEST(TargetGraphText, ParsesEdgeList) {
  auto g = parse_target_graph("# a triangle\nundirected\n0 1 2\n1 2 3  # heavy\n\n0 2 7\n");
  EXPECT_FALSE(g.directed);
  EXPECT_EQ(g.nodes, 3);
  ASSERT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(g.edges[1].weight, 3);
  auto h = parse_target_graph("directed 5\n0 1 1\n");
  EXPECT_TRUE(h.directed);
  EXPECT_EQ(h.nodes, 5);
}

TEST(TargetGraphText, ErrorsCarryLineNumbers) {
  auto message = [](const char* text) {
    try {
      parse_target_graph(text);
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::parse);
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("undirected\n0 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("sideways\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("undirected\n0 1 x\n").find("line 2"), std::string::npos);
  EXPECT_FALSE(message("undirected\n0 0 1\n").empty());
  EXPECT_FALSE(message("").empty());
}

TEST(ShortestPathProperty, MatchesDijkstraOnRandomGraphs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 20)(rng);
    const bool directed = trial % 3 == 0;
    auto edges = oracle::random_connected_graph(rng, n, n, 10);
    ShortestPathBrick brick(to_target(n, edges, directed));
    for (int source = 0; source < n; source += std::max(1, n / 4)) {
      auto want = oracle::dijkstra(n, edges, directed, source);
      auto got = distances(brick, source);
      for (int v = 0; v < n; ++v) {
        auto w = want[static_cast<std::size_t>(v)];
        EXPECT_EQ(got[static_cast<std::size_t>(v)], w ? std::optional<int>(static_cast<int>(*w)) : std::nullopt);
      }
    }
  }
}
