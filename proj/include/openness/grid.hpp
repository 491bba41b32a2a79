#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "openness/mask.hpp"

namespace openness {

inline constexpr double kDefaultGridIntervalM = 0.20;

/// Physical scale of a floor-plan raster.
struct ScaleCalibration {
  double meters_per_pixel = 0.0;
  double floor_area_m2 = 0.0;
  std::size_t interior_pixel_count = 0;
};

/// meters_per_pixel = sqrt(floor_area_m2 / interior_pixel_count).
ScaleCalibration calibrate(const PixelOccupancy& occ, double floor_area_m2);

enum class CellState : std::uint8_t { Outside, Blocked, Node };

/// Grid cell coordinate: x is the column, y the row.
struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(Cell, Cell) = default;
};

/// The analysis lattice. A cell is exactly one of blocked, node, or neither
/// (outside), so the blocked and node flags are exclusive by construction.
class OccupancyGrid {
 public:
  OccupancyGrid(int cols, int rows, double cell_size_m, std::vector<CellState> cells);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell_size_m() const { return cell_size_m_; }
  std::size_t node_count() const { return nodes_.size(); }

  CellState state(int x, int y) const { return cells_[index(x, y)]; }
  bool blocked(int x, int y) const { return state(x, y) == CellState::Blocked; }
  bool is_node(int x, int y) const { return state(x, y) == CellState::Node; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < cols_ && y < rows_; }

  std::span<const CellState> cells() const { return cells_; }

  /// Node cells in row-major order; a node's position here is its ordinal.
  std::span<const Cell> nodes() const { return nodes_; }
  /// Ordinal of the node at (x, y), or -1 when the cell is not a node.
  std::int64_t node_ordinal(int x, int y) const { return ordinals_[index(x, y)]; }

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_ && a.cell_size_m_ == b.cell_size_m_ && a.cells_ == b.cells_;
  }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * cols_ + x; }

  int cols_;
  int rows_;
  double cell_size_m_;
  std::vector<CellState> cells_;
  std::vector<Cell> nodes_;
  std::vector<std::int64_t> ordinals_;
};

/// Lays cells of side `interval_m` over the raster from its top-left corner.
/// A cell's footprint is the set of pixels whose centers fall in the cell
/// rectangle (half-open). Blocked iff any footprint pixel is blocked; node iff
/// not blocked and at least half the footprint is open; otherwise outside.
/// Throws DomainError when no node cell results.
OccupancyGrid build_grid(const PixelOccupancy& occ, const ScaleCalibration& cal,
                         double interval_m = kDefaultGridIntervalM);

/// Cell side length in pixels, snapped to the nearest integer when within 1e-9.
double cell_side_pixels(const ScaleCalibration& cal, double interval_m);

/// '#' blocked, '.' node, ' ' neither; one '\n'-terminated line per row.
std::string to_ascii(const OccupancyGrid& grid);
OccupancyGrid grid_from_ascii(std::string_view text, double cell_size_m = kDefaultGridIntervalM);

}  // namespace openness
