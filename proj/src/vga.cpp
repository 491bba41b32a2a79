#include "openness/vga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "openness/error.hpp"

namespace openness {
namespace {

void require_node(const OccupancyGrid& grid, Cell c) {
  if (!grid.in_bounds(c.x, c.y) || !grid.is_node(c.x, c.y)) {
    throw DomainError(fmt::format("cell ({}, {}) is not a grid node", c.x, c.y));
  }
}

}  // namespace

bool line_of_sight(const OccupancyGrid& grid, Cell p, Cell q) {
  require_node(grid, p);
  require_node(grid, q);
  return walk_supercover(p, q, [&grid](Cell c) { return !grid.blocked(c.x, c.y); });
}

VisibilityField::VisibilityField(OccupancyGrid grid, std::vector<std::uint32_t> counts)
    : grid_(std::move(grid)), counts_(std::move(counts)) {
  if (counts_.size() != grid_.node_count()) throw DomainError("visibility counts do not match the grid's node count");
}

std::uint32_t VisibilityField::count_at(Cell c) const {
  const auto ordinal = grid_.in_bounds(c.x, c.y) ? grid_.node_ordinal(c.x, c.y) : -1;
  if (ordinal < 0) throw DomainError(fmt::format("cell ({}, {}) is not a grid node", c.x, c.y));
  return counts_[static_cast<std::size_t>(ordinal)];
}

VisibilityField visibility_counts(const OccupancyGrid& grid, unsigned workers) {
  const auto nodes = grid.nodes();
  const std::size_t n = nodes.size();
  if (n == 0) throw DomainError("visibility_counts requires at least one node");

  const int cols = grid.cols();
  const int rows = grid.rows();
  std::vector<std::uint8_t> blocked(grid.cells().size());
  std::transform(grid.cells().begin(), grid.cells().end(), blocked.begin(),
                 [](CellState s) { return s == CellState::Blocked ? 1 : 0; });

  // Summed-area table of blocked cells. The supercover of a segment stays in
  // the endpoints' bounding box, so a box without blocked cells means the
  // pair is visible without walking the line.
  const auto stride = static_cast<std::size_t>(cols) + 1;
  std::vector<std::uint32_t> area(stride * (static_cast<std::size_t>(rows) + 1), 0);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      area[(y + 1) * stride + x + 1] = blocked[static_cast<std::size_t>(y) * cols + x] + area[y * stride + x + 1] +
                                       area[(y + 1) * stride + x] - area[y * stride + x];
    }
  }
  auto box_clear = [&area, stride](Cell a, Cell b) {
    const auto x0 = static_cast<std::size_t>(std::min(a.x, b.x)), x1 = static_cast<std::size_t>(std::max(a.x, b.x)) + 1;
    const auto y0 = static_cast<std::size_t>(std::min(a.y, b.y)), y1 = static_cast<std::size_t>(std::max(a.y, b.y)) + 1;
    return area[y1 * stride + x1] - area[y0 * stride + x1] - area[y1 * stride + x0] + area[y0 * stride + x0] == 0;
  };

  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(1, n / 64)));
  // Per-worker tallies; integer sums are order independent, so any
  // schedule yields the same totals.
  std::vector<std::vector<std::uint32_t>> tallies(workers, std::vector<std::uint32_t>(n, 0));
  std::atomic<std::size_t> next{0};

  auto run = [&](unsigned w) {
    auto& local = tallies[w];
    const std::uint8_t* wall = blocked.data();
    for (std::size_t p = next.fetch_add(1, std::memory_order_relaxed); p < n;
         p = next.fetch_add(1, std::memory_order_relaxed)) {
      const Cell a = nodes[p];
      for (std::size_t q = p + 1; q < n; ++q) {
        const bool visible = box_clear(a, nodes[q]) || walk_supercover(a, nodes[q], [wall, cols](Cell c) {
                               return wall[static_cast<std::size_t>(c.y) * cols + c.x] == 0;
                             });
        if (visible) {
          ++local[p];
          ++local[q];
        }
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  std::vector<std::uint32_t> counts(n, 0);
  for (const auto& local : tallies) {
    for (std::size_t i = 0; i < n; ++i) counts[i] += local[i];
  }
  return VisibilityField(grid, std::move(counts));
}

Openness2DSummary summarize(const VisibilityField& field) {
  const auto counts = field.counts();
  if (counts.empty()) throw DomainError("cannot summarize an empty visibility field");
  const std::size_t n = counts.size();

  Openness2DSummary s;
  s.node_count = n;
  std::uint64_t total = 0;
  for (const auto c : counts) total += c;
  s.mean_visibility = static_cast<double>(total) / static_cast<double>(n);

  double squares = 0.0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - s.mean_visibility;
    squares += d * d;
  }
  s.std_visibility = std::sqrt(squares / static_cast<double>(n));

  std::vector<std::uint32_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  s.min_visibility = sorted.front();
  s.max_visibility = sorted.back();
  s.median_visibility = sorted[(n - 1) / 2];
  if (n > 1) s.mean_relative = s.mean_visibility / static_cast<double>(n - 1);
  return s;
}

GrayImage render_heatmap(const VisibilityField& field) {
  const auto& grid = field.grid();
  const auto counts = field.counts();
  GrayImage image;
  image.width = grid.cols();
  image.height = grid.rows();
  image.pixels.assign(static_cast<std::size_t>(image.width) * image.height, 255);

  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  if (!counts.empty()) {
    const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    lo = *mn;
    hi = *mx;
  }
  const std::uint64_t span = hi - lo;

  for (int y = 0; y < grid.rows(); ++y) {
    for (int x = 0; x < grid.cols(); ++x) {
      switch (grid.state(x, y)) {
        case CellState::Blocked:
          image.at(x, y) = 0;
          break;
        case CellState::Outside:
          image.at(x, y) = 255;
          break;
        case CellState::Node: {
          if (span == 0) {
            image.at(x, y) = 255;
          } else {
            // 64 + round((c - lo) * 191 / span), half rounded up.
            const std::uint64_t offset = field.count_at({x, y}) - lo;
            image.at(x, y) = static_cast<std::uint8_t>(64 + (2 * offset * 191 + span) / (2 * span));
          }
          break;
        }
      }
    }
  }
  return image;
}

}  // namespace openness
