#include "openness/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "openness/error.hpp"

namespace openness {

ScaleCalibration calibrate(const PixelOccupancy& occ, double floor_area_m2) {
  if (!(floor_area_m2 > 0.0) || !std::isfinite(floor_area_m2)) {
    throw DomainError(fmt::format("floor area must be positive and finite, got {}", floor_area_m2));
  }
  if (occ.interior_pixel_count == 0) throw DomainError("cannot calibrate a plan with zero interior pixels");
  const double mpp = std::sqrt(floor_area_m2 / static_cast<double>(occ.interior_pixel_count));
  if (!(mpp > 0.0) || !std::isfinite(mpp)) throw DomainError("calibration produced a non-finite scale");
  return {mpp, floor_area_m2, occ.interior_pixel_count};
}

OccupancyGrid::OccupancyGrid(int cols, int rows, double cell_size_m, std::vector<CellState> cells)
    : cols_(cols), rows_(rows), cell_size_m_(cell_size_m), cells_(std::move(cells)) {
  if (cols_ <= 0 || rows_ <= 0) throw DomainError("grid must have at least one cell");
  if (!(cell_size_m_ > 0.0)) throw DomainError("grid cell size must be positive");
  if (cells_.size() != static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_)) {
    throw DomainError("grid cell vector does not match its dimensions");
  }
  ordinals_.assign(cells_.size(), -1);
  for (int y = 0; y < rows_; ++y) {
    for (int x = 0; x < cols_; ++x) {
      if (cells_[index(x, y)] == CellState::Node) {
        ordinals_[index(x, y)] = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back({x, y});
      }
    }
  }
}

double cell_side_pixels(const ScaleCalibration& cal, double interval_m) {
  if (!(interval_m > 0.0) || !std::isfinite(interval_m)) {
    throw DomainError(fmt::format("grid interval must be positive, got {}", interval_m));
  }
  if (!(cal.meters_per_pixel > 0.0)) throw DomainError("calibration scale must be positive");
  const double side = interval_m / cal.meters_per_pixel;
  const double nearest = std::round(side);
  if (nearest >= 1.0 && std::abs(side - nearest) <= 1e-9 * nearest) return nearest;
  return side;
}

OccupancyGrid build_grid(const PixelOccupancy& occ, const ScaleCalibration& cal, double interval_m) {
  const double side = cell_side_pixels(cal, interval_m);
  if (occ.width <= 0 || occ.height <= 0) throw DomainError("empty pixel raster");

  // Pixel p (center p + 0.5) belongs to cell floor((p + 0.5) / side).
  auto cell_of = [side](int p) { return static_cast<int>(std::floor((p + 0.5) / side)); };
  std::vector<int> col_of(static_cast<std::size_t>(occ.width));
  std::vector<int> row_of(static_cast<std::size_t>(occ.height));
  for (int x = 0; x < occ.width; ++x) col_of[x] = cell_of(x);
  for (int y = 0; y < occ.height; ++y) row_of[y] = cell_of(y);
  const int cols = col_of.back() + 1;
  const int rows = row_of.back() + 1;

  const auto n_cells = static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows);
  std::vector<std::uint32_t> footprint(n_cells, 0);
  std::vector<std::uint32_t> open(n_cells, 0);
  std::vector<std::uint8_t> any_blocked(n_cells, 0);
  for (int y = 0; y < occ.height; ++y) {
    const auto row_base = static_cast<std::size_t>(row_of[y]) * cols;
    for (int x = 0; x < occ.width; ++x) {
      const auto c = row_base + col_of[x];
      ++footprint[c];
      switch (occ.at(x, y)) {
        case PixelState::Blocked:
          any_blocked[c] = 1;
          break;
        case PixelState::Open:
          ++open[c];
          break;
        case PixelState::Outside:
          break;
      }
    }
  }

  std::vector<CellState> cells(n_cells, CellState::Outside);
  std::size_t nodes = 0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    if (any_blocked[c]) {
      cells[c] = CellState::Blocked;
    } else if (footprint[c] > 0 && 2 * open[c] >= footprint[c]) {
      cells[c] = CellState::Node;
      ++nodes;
    }
  }
  if (nodes == 0) throw DomainError("zero node cells: the grid has no traversable interior");
  return OccupancyGrid(cols, rows, interval_m, std::move(cells));
}

std::string to_ascii(const OccupancyGrid& grid) {
  std::string out;
  out.reserve((static_cast<std::size_t>(grid.cols()) + 1) * grid.rows());
  for (int y = 0; y < grid.rows(); ++y) {
    for (int x = 0; x < grid.cols(); ++x) {
      switch (grid.state(x, y)) {
        case CellState::Blocked:
          out.push_back('#');
          break;
        case CellState::Node:
          out.push_back('.');
          break;
        case CellState::Outside:
          out.push_back(' ');
          break;
      }
    }
    out.push_back('\n');
  }
  return out;
}

OccupancyGrid grid_from_ascii(std::string_view text, double cell_size_m) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines.front().empty()) throw FormatError("empty grid fixture");
  const auto cols = lines.front().size();
  std::vector<CellState> cells;
  cells.reserve(cols * lines.size());
  for (std::size_t y = 0; y < lines.size(); ++y) {
    if (lines[y].size() != cols) throw FormatError(fmt::format("grid fixture line {} has unequal length", y));
    for (std::size_t x = 0; x < cols; ++x) {
      switch (lines[y][x]) {
        case '#':
          cells.push_back(CellState::Blocked);
          break;
        case '.':
          cells.push_back(CellState::Node);
          break;
        case ' ':
          cells.push_back(CellState::Outside);
          break;
        default:
          throw FormatError(fmt::format("unknown grid symbol '{}' at ({}, {})", lines[y][x], x, y));
      }
    }
  }
  return OccupancyGrid(static_cast<int>(cols), static_cast<int>(lines.size()), cell_size_m, std::move(cells));
}

}  // namespace openness
