#include <gtest/gtest.h>

#include <random>

#include "brickwork/brickwork.hpp"
#include "support/helpers.hpp"

using namespace brickwork;
using testing_support::Bench;
using testing_support::vec;

namespace {

// Runs a threshold brick on value v; returns the output spike time if any.
std::optional<int> threshold_out(int reference, int value) {
  ThresholdBrick brick(reference);
  Bench bench(brick, {vec(1, 1, Coding::temporal_value)});
  auto r = bench.run({{{0, Bench::t0 + value}}}, reference + value + 10);
  auto s = r.spikes(bench.out()[0]);
  EXPECT_LE(s.size(), 1u);
  if (s.empty()) return std::nullopt;
  return s[0];
}

}  // namespace

TEST(Threshold, BelowReferencePasses) { EXPECT_EQ(threshold_out(5, 3), std::optional<int>(Bench::t0 + 1 + 3)); }
TEST(Threshold, AboveReferenceSilent) { EXPECT_EQ(threshold_out(5, 7), std::nullopt); }
TEST(Threshold, BoundaryIncluded) { EXPECT_EQ(threshold_out(5, 5), std::optional<int>(Bench::t0 + 1 + 5)); }
TEST(Threshold, NegativeReferenceRejected) {
  try {
    ThresholdBrick b(-1);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::parameter);
  }
}

TEST(ThresholdProperty, MatchesComparison) {
  for (int reference = 0; reference <= 6; ++reference)
    for (int value = 0; value <= 9; ++value)
      EXPECT_EQ(threshold_out(reference, value).has_value(), value <= reference) << reference << " " << value;
}

TEST(Threshold, DeadlineUsesInhibitoryBeginSynapse) {
  ThresholdBrick brick(4);
  auto built = brick.build(std::vector<PortShape>{vec(1, 1, Coding::temporal_value)}, Namer("main", "th"));
  const auto& s = built.fragment.synapse(built.begin, built.outputs[0].neurons[0]);
  EXPECT_LT(s.weight, -1000.0);
  EXPECT_EQ(s.delay, 4 + 2);
}

TEST(Minimum, EarliestWins) {
  MinimumBrick brick(3);
  Bench bench(brick, {vec(3, 10, Coding::temporal_value)});
  auto r = bench.run({{{0, Bench::t0 + 4}, {1, Bench::t0 + 2}, {2, Bench::t0 + 9}}}, 30);
  EXPECT_EQ(bench.output_events(r), (std::vector<std::pair<int, int>>{{1, Bench::t0 + 3}}));
}

TEST(Minimum, TiesAllFire) {
  MinimumBrick brick(2);
  Bench bench(brick, {vec(2, 4, Coding::temporal_value)});
  auto r = bench.run({{{0, Bench::t0 + 3}, {1, Bench::t0 + 3}}}, 20);
  EXPECT_EQ(bench.output_events(r).size(), 2u);
}

TEST(Minimum, SingleChannelPassesThrough) {
  MinimumBrick brick(1);
  Bench bench(brick, {vec(1, 6, Coding::temporal_value)});
  auto r = bench.run({{{0, Bench::t0 + 5}}}, 20);
  EXPECT_EQ(bench.output_events(r), (std::vector<std::pair<int, int>>{{0, Bench::t0 + 6}}));
}

TEST(MinimumProperty, RandomTimesMatchArgminSet) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 7)(rng);
    MinimumBrick brick(static_cast<std::size_t>(k));
    Bench bench(brick, {vec(k, 8, Coding::temporal_value)});
    std::vector<std::pair<int, int>> spikes;
    std::vector<int> times;
    for (int i = 0; i < k; ++i) {
      times.push_back(std::uniform_int_distribution<int>(0, 7)(rng));
      spikes.push_back({i, Bench::t0 + times.back()});
    }
    auto r = bench.run({spikes}, 30);
    const int best = *std::min_element(times.begin(), times.end());
    std::vector<std::pair<int, int>> expected;
    for (int i = 0; i < k; ++i)
      if (times[static_cast<std::size_t>(i)] == best) expected.push_back({i, Bench::t0 + 1 + best});
    EXPECT_EQ(bench.output_events(r), expected);
  }
}
