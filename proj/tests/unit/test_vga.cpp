#include <gtest/gtest.h>

#include <random>
#include <set>

#include "openness/error.hpp"
#include "openness/vga.hpp"
#include "oracles.hpp"

using namespace openness;
using openness::testkit::empty_room;
using openness::testkit::oracle_counts;
using openness::testkit::split_room;

namespace {

std::vector<std::uint32_t> counts_of(const OccupancyGrid& grid, unsigned workers = 1) {
  const auto field = visibility_counts(grid, workers);
  return {field.counts().begin(), field.counts().end()};
}

}  // namespace

TEST(LineOfSight, EmptyRoomDiagonal) {
  const auto grid = empty_room(5, 5);
  EXPECT_TRUE(line_of_sight(grid, {0, 0}, {4, 4}));
}

TEST(LineOfSight, FullSeparatingWall) {
  EXPECT_FALSE(line_of_sight(split_room(), {0, 2}, {4, 2}));
}

TEST(LineOfSight, DiagonalBlockersCloseTheCorner) {
  const auto grid = grid_from_ascii(".#\n#.\n");
  EXPECT_FALSE(line_of_sight(grid, {0, 0}, {1, 1}));
  EXPECT_FALSE(line_of_sight(grid, {1, 1}, {0, 0}));
}

TEST(LineOfSight, CornerWithOneBlockerAlsoBlocks) {
  // Segment (0,0) -> (2,2) passes through the corner shared with (1,0).
  const auto grid = grid_from_ascii(".#.\n...\n...\n");
  EXPECT_FALSE(line_of_sight(grid, {0, 0}, {2, 2}));
  EXPECT_TRUE(line_of_sight(grid, {0, 2}, {2, 2}));
}

TEST(LineOfSight, OutsideCellsDoNotBlock) {
  const auto grid = grid_from_ascii(". .\n");
  EXPECT_TRUE(line_of_sight(grid, {0, 0}, {2, 0}));
}

TEST(LineOfSight, EndpointsMustBeNodes) {
  const auto grid = grid_from_ascii(".#\n. \n");
  EXPECT_THROW(line_of_sight(grid, {0, 0}, {1, 0}), DomainError);
  EXPECT_THROW(line_of_sight(grid, {1, 1}, {0, 0}), DomainError);
  EXPECT_THROW(line_of_sight(grid, {0, 0}, {5, 5}), DomainError);
  EXPECT_TRUE(line_of_sight(grid, {0, 0}, {0, 0}));
}

TEST(Supercover, MatchesGeometricOracleCellSet) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coord(0, 15);
  for (int trial = 0; trial < 2000; ++trial) {
    const Cell a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    std::set<std::pair<int, int>> walked;
    walk_supercover(a, b, [&](Cell c) {
      walked.insert({c.x, c.y});
      return true;
    });
    std::set<std::pair<int, int>> expected;
    for (int y = 0; y <= 15; ++y) {
      for (int x = 0; x <= 15; ++x) {
        if (openness::testkit::segment_touches_cell(a, b, x, y)) expected.insert({x, y});
      }
    }
    ASSERT_EQ(walked, expected) << "a=(" << a.x << "," << a.y << ") b=(" << b.x << "," << b.y << ")";
  }
}

TEST(VisibilityCounts, ConvexRooms) {
  EXPECT_EQ(counts_of(empty_room(3, 3)), std::vector<std::uint32_t>(9, 8));
  EXPECT_EQ(counts_of(empty_room(1, 5)), std::vector<std::uint32_t>(5, 4));
  EXPECT_EQ(counts_of(empty_room(5, 1)), std::vector<std::uint32_t>(5, 4));
}

TEST(VisibilityCounts, SplitRoom) {
  const auto counts = counts_of(split_room());
  EXPECT_EQ(counts, std::vector<std::uint32_t>(20, 9));
  EXPECT_EQ(counts, oracle_counts(split_room()));
}

TEST(VisibilityCounts, SingleNode) {
  EXPECT_EQ(counts_of(grid_from_ascii("#.#\n")), std::vector<std::uint32_t>{0});
}

TEST(VisibilityCounts, RejectsGridWithoutNodes) {
  EXPECT_THROW(visibility_counts(grid_from_ascii("# \n")), DomainError);
}

TEST(VisibilityCounts, MatchesOracleOnRandomGrids) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 10);
  std::uniform_real_distribution<double> density(0.0, 0.3);
  for (int trial = 0; trial < 150; ++trial) {
    const auto grid = openness::testkit::random_grid(rng, dim(rng), dim(rng), density(rng), 0.1);
    ASSERT_EQ(counts_of(grid), oracle_counts(grid)) << to_ascii(grid);
  }
}

TEST(VisibilityCounts, IndependentOfWorkerCount) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto grid = openness::testkit::random_grid(rng, 30, 25, 0.15);
    const auto one = counts_of(grid, 1);
    EXPECT_EQ(counts_of(grid, 2), one);
    EXPECT_EQ(counts_of(grid, 4), one);
    EXPECT_EQ(counts_of(grid, 0), one);  // clamped to one worker
  }
}

TEST(VisibilityCounts, RotationAndMirrorPermuteCounts) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto grid = openness::testkit::random_grid(rng, 9, 6, 0.2);
    const auto field = visibility_counts(grid);
    const auto rotated = openness::testkit::rotate90(grid);
    const auto rotated_field = visibility_counts(rotated);
    const auto mirrored = openness::testkit::mirror_x(grid);
    const auto mirrored_field = visibility_counts(mirrored);
    for (const auto c : grid.nodes()) {
      EXPECT_EQ(rotated_field.count_at(openness::testkit::rotate90(grid, c)), field.count_at(c));
      EXPECT_EQ(mirrored_field.count_at({grid.cols() - 1 - c.x, c.y}), field.count_at(c));
    }
  }
}

TEST(VisibilityCounts, BlockingACellNeverIncreasesCounts) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto grid = openness::testkit::random_grid(rng, 8, 8, 0.1);
    if (grid.node_count() < 2) continue;
    const auto before = visibility_counts(grid);
    const auto victim = grid.nodes()[static_cast<std::size_t>(trial) % grid.node_count()];
    const auto after = visibility_counts(openness::testkit::with_blocked(grid, victim));
    for (const auto c : after.grid().nodes()) EXPECT_LE(after.count_at(c), before.count_at(c));
  }
}

TEST(Summarize, EmptyRoom) {
  const auto s = summarize(visibility_counts(empty_room(3, 3)));
  EXPECT_EQ(s.mean_visibility, 8.0);
  EXPECT_EQ(s.std_visibility, 0.0);
  ASSERT_TRUE(s.mean_relative.has_value());
  EXPECT_EQ(*s.mean_relative, 1.0);
  EXPECT_EQ(s.node_count, 9u);
}

TEST(Summarize, SplitRoom) {
  const auto s = summarize(visibility_counts(split_room()));
  EXPECT_EQ(s.mean_visibility, 9.0);
  EXPECT_EQ(s.std_visibility, 0.0);
  EXPECT_EQ(*s.mean_relative, 9.0 / 19.0);
  EXPECT_EQ(s.min_visibility, 9u);
  EXPECT_EQ(s.max_visibility, 9u);
  EXPECT_EQ(s.median_visibility, 9u);
}

TEST(Summarize, SingleNodeHasNoRelativeMean) {
  const auto s = summarize(visibility_counts(grid_from_ascii(".\n")));
  EXPECT_EQ(s.mean_visibility, 0.0);
  EXPECT_EQ(s.std_visibility, 0.0);
  EXPECT_FALSE(s.mean_relative.has_value());
}

TEST(Summarize, PopulationStdAndLowerMedian) {
  // An explicit field pins the statistics.
  const auto grid = grid_from_ascii("....\n");
  const VisibilityField field(grid, {1, 3, 5, 7});
  const auto s = summarize(field);
  EXPECT_EQ(s.mean_visibility, 4.0);
  EXPECT_DOUBLE_EQ(s.std_visibility, std::sqrt(5.0));
  EXPECT_EQ(s.median_visibility, 3u);
  EXPECT_EQ(s.min_visibility, 1u);
  EXPECT_EQ(s.max_visibility, 7u);
  EXPECT_DOUBLE_EQ(*s.mean_relative, 4.0 / 3.0);
}

TEST(Summarize, OrderingInvariantsOnRandomGrids) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = summarize(visibility_counts(openness::testkit::random_grid(rng, 10, 10, 0.25)));
    EXPECT_LE(s.min_visibility, s.median_visibility);
    EXPECT_LE(s.median_visibility, s.max_visibility);
    EXPECT_GE(s.mean_visibility, s.min_visibility);
    EXPECT_LE(s.mean_visibility, s.max_visibility);
    if (s.mean_relative) {
      EXPECT_GE(*s.mean_relative, 0.0);
      EXPECT_LE(*s.mean_relative, 1.0);
    }
  }
}

TEST(Heatmap, RampEndpoints) {
  const auto grid = grid_from_ascii(".# .\n");
  const auto img = render_heatmap(VisibilityField(grid, {1, 3}));
  ASSERT_EQ(img.width, 4);
  ASSERT_EQ(img.height, 1);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{64, 0, 255, 255}));
}

TEST(Heatmap, MidpointRoundsHalfUp) {
  const auto grid = grid_from_ascii("...\n");
  const auto img = render_heatmap(VisibilityField(grid, {0, 1, 2}));
  // 64 + 191 / 2 = 159.5
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{64, 160, 255}));
}

TEST(Heatmap, UniformFieldIsWhite) {
  const auto img = render_heatmap(visibility_counts(empty_room(4, 3)));
  EXPECT_EQ(img.pixels, std::vector<std::uint8_t>(12, 255));
}

TEST(Heatmap, SplitRoomHalvesMatchAndWallIsBlack) {
  const auto img = render_heatmap(visibility_counts(split_room()));
  for (int y = 0; y < 5; ++y) {
    EXPECT_EQ(img.at(2, y), 0);
    for (int x : {0, 1, 3, 4}) EXPECT_EQ(img.at(x, y), img.at(0, 0));
  }
}
