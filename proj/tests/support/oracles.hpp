#pragma once

// Reference implementations used only by tests. They share no code with the
// library kernels they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "openness/grid.hpp"

namespace openness::testkit {

/// Closed segment between cell centers vs closed unit square of cell (cx, cy),
/// in doubled integer coordinates: centers are odd, square edges even.
/// Intersects iff the bounding boxes overlap and the square's corners are not
/// all strictly on one side of the segment's supporting line.
inline bool segment_touches_cell(Cell a, Cell b, int cx, int cy) {
  const std::int64_t ax = 2 * a.x + 1, ay = 2 * a.y + 1;
  const std::int64_t bx = 2 * b.x + 1, by = 2 * b.y + 1;
  const std::int64_t x0 = 2 * cx, x1 = 2 * cx + 2, y0 = 2 * cy, y1 = 2 * cy + 2;
  if (std::max(ax, bx) < x0 || std::min(ax, bx) > x1) return false;
  if (std::max(ay, by) < y0 || std::min(ay, by) > y1) return false;
  const std::int64_t dx = bx - ax, dy = by - ay;
  int positive = 0, negative = 0;
  for (const auto [px, py] : {std::pair{x0, y0}, std::pair{x1, y0}, std::pair{x0, y1}, std::pair{x1, y1}}) {
    const std::int64_t cross = dx * (py - ay) - dy * (px - ax);
    if (cross > 0) ++positive;
    if (cross < 0) ++negative;
  }
  return !(positive == 4 || negative == 4);
}

/// Brute force: scan every blocked cell in the bounding box.
inline bool oracle_line_of_sight(const OccupancyGrid& grid, Cell a, Cell b) {
  const int lo_x = std::min(a.x, b.x), hi_x = std::max(a.x, b.x);
  const int lo_y = std::min(a.y, b.y), hi_y = std::max(a.y, b.y);
  for (int y = lo_y; y <= hi_y; ++y) {
    for (int x = lo_x; x <= hi_x; ++x) {
      if (grid.blocked(x, y) && segment_touches_cell(a, b, x, y)) return false;
    }
  }
  return true;
}

/// Naive all-ordered-pairs visibility counts in node-ordinal order.
inline std::vector<std::uint32_t> oracle_counts(const OccupancyGrid& grid) {
  const auto nodes = grid.nodes();
  std::vector<std::uint32_t> counts(nodes.size(), 0);
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      if (p != q && oracle_line_of_sight(grid, nodes[p], nodes[q])) ++counts[p];
    }
  }
  return counts;
}

/// Random grid with the given blocked density; remaining cells are nodes
/// except an optional share of outside cells. Guarantees at least one node.
inline OccupancyGrid random_grid(std::mt19937_64& rng, int cols, int rows, double blocked_density,
                                 double outside_density = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CellState> cells(static_cast<std::size_t>(cols) * rows);
  for (auto& c : cells) {
    const double v = u(rng);
    c = v < blocked_density ? CellState::Blocked
        : v < blocked_density + outside_density ? CellState::Outside
                                                : CellState::Node;
  }
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  cells[pick(rng)] = CellState::Node;
  return OccupancyGrid(cols, rows, kDefaultGridIntervalM, std::move(cells));
}

/// Rotates 90 degrees clockwise: (x, y) -> (rows - 1 - y, x).
inline OccupancyGrid rotate90(const OccupancyGrid& g) {
  const int cols = g.rows(), rows = g.cols();
  std::vector<CellState> cells(static_cast<std::size_t>(cols) * rows);
  for (int y = 0; y < g.rows(); ++y) {
    for (int x = 0; x < g.cols(); ++x) {
      const int nx = g.rows() - 1 - y, ny = x;
      cells[static_cast<std::size_t>(ny) * cols + nx] = g.state(x, y);
    }
  }
  return OccupancyGrid(cols, rows, g.cell_size_m(), std::move(cells));
}

inline Cell rotate90(const OccupancyGrid& g, Cell c) { return {g.rows() - 1 - c.y, c.x}; }

/// Mirrors left-right: (x, y) -> (cols - 1 - x, y).
inline OccupancyGrid mirror_x(const OccupancyGrid& g) {
  std::vector<CellState> cells(static_cast<std::size_t>(g.cols()) * g.rows());
  for (int y = 0; y < g.rows(); ++y) {
    for (int x = 0; x < g.cols(); ++x) cells[static_cast<std::size_t>(y) * g.cols() + (g.cols() - 1 - x)] = g.state(x, y);
  }
  return OccupancyGrid(g.cols(), g.rows(), g.cell_size_m(), std::move(cells));
}

/// Same grid with one extra cell blocked.
inline OccupancyGrid with_blocked(const OccupancyGrid& g, Cell c) {
  std::vector<CellState> cells(g.cells().begin(), g.cells().end());
  cells[static_cast<std::size_t>(c.y) * g.cols() + c.x] = CellState::Blocked;
  return OccupancyGrid(g.cols(), g.rows(), g.cell_size_m(), std::move(cells));
}

/// n x m grid of nodes.
inline OccupancyGrid empty_room(int cols, int rows) {
  return OccupancyGrid(cols, rows, kDefaultGridIntervalM,
                       std::vector<CellState>(static_cast<std::size_t>(cols) * rows, CellState::Node));
}

/// 5 x 5 nodes with column x = 2 blocked.
inline OccupancyGrid split_room() {
  return grid_from_ascii("..#..\n..#..\n..#..\n..#..\n..#..\n");
}

}  // namespace openness::testkit
