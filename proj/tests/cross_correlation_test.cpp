#include <gtest/gtest.h>

#include "brickwork/brickwork.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace brickwork;
using testing_support::Bench;
using testing_support::vec;

namespace {

struct Readout {
  std::set<int> offsets;
  std::optional<int> time;
};

Readout correlate(const Bench& bench, const std::vector<int>& u, const std::vector<int>& v) {
  const int n = static_cast<int>(u.size());
  auto r = bench.present({u, v}, 2 * n + 12);
  Readout out;
  for (auto [line, t] : bench.output_events(r)) {
    out.offsets.insert(CrossCorrelationBrick::offset_of(static_cast<std::size_t>(line), n));
    if (!out.time) out.time = t;
    EXPECT_EQ(*out.time, t) << "winners must fire together";
  }
  return out;
}

}  // namespace

TEST(CrossCorrelation, IdenticalVectorsWinAtZero) {
  CrossCorrelationBrick brick(3);
  Bench bench(brick, {vec(3), vec(3)});
  EXPECT_EQ(correlate(bench, {1, 0, 1}, {1, 0, 1}).offsets, std::set<int>{0});
}

TEST(CrossCorrelation, OneHotShift) {
  CrossCorrelationBrick brick(3);
  Bench bench(brick, {vec(3), vec(3)});
  EXPECT_EQ(correlate(bench, {1, 0, 0}, {0, 0, 1}).offsets, std::set<int>{2});
}

TEST(CrossCorrelation, LayerSizes) {
  for (int n = 1; n <= 6; ++n) {
    CrossCorrelationBrick brick(n);
    auto built = brick.build(std::vector<PortShape>{vec(n), vec(n)}, Namer("main", "xc"));
    int coincidence = 0, outputs = 0;
    for (const auto& [id, neuron] : built.fragment.neurons()) {
      coincidence += id.find(":coincide[") != std::string::npos;
      outputs += neuron.role == Role::output;
    }
    EXPECT_EQ(coincidence, n * n);
    EXPECT_EQ(outputs, 2 * n - 1);
    // 2N landing relays, pacer, begin, done.
    EXPECT_EQ(built.fragment.neuron_count(), static_cast<std::size_t>(n * n + (2 * n - 1) + 2 * n + 3));
  }
}

TEST(CrossCorrelation, ErrorsAndShapes) {
  EXPECT_THROW(CrossCorrelationBrick(0), error);
  CrossCorrelationBrick fixed(3);
  EXPECT_THROW(fixed.resolve_metadata(std::vector<PortShape>{vec(4), vec(4)}), error);
  CrossCorrelationBrick any;
  EXPECT_THROW(any.resolve_metadata(std::vector<PortShape>{vec(3), vec(4)}), error);
  EXPECT_THROW(any.resolve_metadata(std::vector<PortShape>{vec(3, 2), vec(3)}), error);
}

TEST(CrossCorrelation, WinnerTimeEncodesMaxOverlapAndDoneFollows) {
  const int n = 5;
  CrossCorrelationBrick brick(n);
  Bench bench(brick, {vec(n), vec(n)});
  std::vector<int> u{1, 1, 0, 1, 0}, v{1, 1, 0, 1, 1};
  auto r = bench.present({u, v}, 30);
  int cmax = 0;
  for (auto [s, c] : oracle::overlaps(u, v)) cmax = std::max(cmax, c);
  auto winner = correlate(bench, u, v);
  ASSERT_TRUE(winner.time);
  EXPECT_EQ(*winner.time, Bench::t0 + 3 + n - cmax);
  auto done = r.spikes(bench.built.done);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0], *winner.time + 1);
}

TEST(CrossCorrelationProperty, ExhaustiveUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    CrossCorrelationBrick brick(n);
    Bench bench(brick, {vec(n), vec(n)});
    for (unsigned a = 0; a < (1u << n); ++a)
      for (unsigned b = 0; b < (1u << n); ++b) {
        auto u = testing_support::bits_of(a, n), v = testing_support::bits_of(b, n);
        EXPECT_EQ(correlate(bench, u, v).offsets, oracle::argmax_offsets(u, v)) << n << " " << a << " " << b;
      }
  }
}
