#include <gtest/gtest.h>

#include "brickwork/brickwork.hpp"
#include "support/helpers.hpp"

using namespace brickwork;
using testing_support::Bench;
using testing_support::vec;

namespace {

std::vector<PortShape> buffer_shapes(int lines, int duration = 1) { return {vec(lines, duration), vec(1)}; }

}  // namespace

TEST(Buffer, ReleasesLatchedPatternOnce) {
  BufferBrick brick;
  Bench bench(brick, buffer_shapes(3));
  // Data emitted at 2; release emitted at 8 fires the release relay at 9.
  auto r = bench.run({{{0, 2}, {2, 2}}, {{0, 8}}}, 20);
  EXPECT_EQ(bench.output_events(r), (std::vector<std::pair<int, int>>{{0, 10}, {2, 10}}));
  EXPECT_EQ(8 + BufferBrick::kReleaseLatency, 10);
  auto done = r.spikes(bench.built.done);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0], 11);
}

TEST(Buffer, ReleaseWithNothingLatched) {
  BufferBrick brick;
  Bench bench(brick, buffer_shapes(4));
  auto r = bench.run({{}, {{0, 5}}}, 15);
  EXPECT_TRUE(bench.output_events(r).empty());
  EXPECT_EQ(r.spikes(bench.built.done).size(), 1u);
}

TEST(Buffer, HoldsUntilReleaseHoweverLong) {
  BufferBrick brick;
  Bench bench(brick, buffer_shapes(2));
  auto r = bench.run({{{1, 2}}, {{0, 60}}}, 70);
  EXPECT_EQ(bench.output_events(r), (std::vector<std::pair<int, int>>{{1, 62}}));
}

TEST(Buffer, MultiStepUpstreamUnsupported) {
  BufferBrick brick;
  try {
    brick.resolve_metadata(buffer_shapes(2, 4));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unsupported_buffer);
  }
}

TEST(Buffer, LatchParameters) {
  BufferBrick brick;
  auto built = brick.build(buffer_shapes(1), Namer("main", "buf"));
  const auto& latch = built.fragment.neuron(built.inputs[0].neurons[0]);
  EXPECT_EQ(latch.params.threshold, 0.5);
  EXPECT_EQ(latch.params.decay, 0.0);
  EXPECT_EQ(built.fragment.synapse(latch.id, latch.id).weight, 1.0);
  EXPECT_EQ(built.fragment.neuron(built.outputs[0].neurons[0]).params.threshold, 1.5);
}
