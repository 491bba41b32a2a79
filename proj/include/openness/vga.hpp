#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "openness/grid.hpp"
#include "openness/image_io.hpp"

namespace openness {

/// True iff the closed segment joining the centers of node cells `p` and `q`
/// touches no blocked cell's closed square. A segment through a lattice
/// corner tests all four cells sharing it. Exact integer arithmetic.
/// Throws DomainError when either endpoint is not a node.
bool line_of_sight(const OccupancyGrid& grid, Cell p, Cell q);

/// Calls `visit(cell)` for every cell of the supercover of the segment from
/// the center of `a` to the center of `b`, starting at `a` and ending at `b`.
/// Stops early and returns false as soon as `visit` returns false.
template <typename Visit>
bool walk_supercover(Cell a, Cell b, Visit&& visit) {
  const int dx = a.x < b.x ? b.x - a.x : a.x - b.x;
  const int dy = a.y < b.y ? b.y - a.y : a.y - b.y;
  const int sx = b.x > a.x ? 1 : -1;
  const int sy = b.y > a.y ? 1 : -1;
  int x = a.x;
  int y = a.y;
  if (!visit(Cell{x, y})) return false;
  // The i-th vertical boundary is crossed at t = (2i+1) / (2dx), the j-th
  // horizontal one at t = (2j+1) / (2dy); compare them cross-multiplied.
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  while (ix < dx || iy < dy) {
    const std::int64_t tx = (2 * ix + 1) * dy;
    const std::int64_t ty = (2 * iy + 1) * dx;
    if (iy >= dy || (ix < dx && tx < ty)) {
      x += sx;
      ++ix;
    } else if (ix >= dx || ty < tx) {
      y += sy;
      ++iy;
    } else {
      if (!visit(Cell{x + sx, y}) || !visit(Cell{x, y + sy})) return false;
      x += sx;
      y += sy;
      ++ix;
      ++iy;
    }
    if (!visit(Cell{x, y})) return false;
  }
  return true;
}

/// Per-node visibility degrees over a grid. Counts are indexed by node
/// ordinal (row-major order of node cells) and exclude the node itself.
class VisibilityField {
 public:
  VisibilityField(OccupancyGrid grid, std::vector<std::uint32_t> counts);

  const OccupancyGrid& grid() const { return grid_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::size_t node_count() const { return counts_.size(); }
  std::uint32_t count_at(Cell c) const;

 private:
  OccupancyGrid grid_;
  std::vector<std::uint32_t> counts_;
};

/// counts[p] = |{q != p : line_of_sight(p, q)}|. Each unordered pair is tested
/// once; `workers` threads share the work and the result does not depend on it.
VisibilityField visibility_counts(const OccupancyGrid& grid, unsigned workers = 1);

/// The 2D openness indicators of a dwelling.
struct Openness2DSummary {
  double mean_visibility = 0.0;
  double std_visibility = 0.0;  ///< population (ddof = 0)
  std::uint32_t min_visibility = 0;
  std::uint32_t max_visibility = 0;
  std::uint32_t median_visibility = 0;  ///< lower middle value for even N
  std::optional<double> mean_relative;  ///< mean / (N - 1); absent when N == 1
  std::size_t node_count = 0;
};

Openness2DSummary summarize(const VisibilityField& field);

/// One pixel per cell: blocked black, outside white, nodes on a linear ramp
/// from 64 (min count) to 255 (max count); all nodes 255 when max == min.
GrayImage render_heatmap(const VisibilityField& field);

}  // namespace openness
