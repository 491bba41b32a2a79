#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "openness/analytics.hpp"
#include "openness/config.hpp"
#include "openness/image_io.hpp"
#include "openness/interior.hpp"
#include "openness/mask.hpp"
#include "openness/vga.hpp"

namespace openness {

/// Everything computed for one property.
struct PropertyMetrics {
  PropertyRecord record;
  ScaleCalibration calibration;
  int grid_cols = 0;
  int grid_rows = 0;
  Openness2DSummary visibility;
  std::optional<ElementRatios> ratios;  ///< absent when the property has no interior image
  std::size_t interior_images = 0;
};

/// Column order of metrics.csv.
inline constexpr std::array<std::string_view, 23> kMetricsColumns{
    "property_id",      "region_key",     "rent",           "floor_area_m2",     "construction_year",
    "latitude",         "longitude",      "meters_per_pixel", "grid_cols",       "grid_rows",
    "node_count",       "mean_visibility", "std_visibility", "min_visibility",   "max_visibility",
    "median_visibility", "mean_relative", "wall_ratio",     "ceiling_ratio",     "floor_ratio",
    "window_ratio",     "other_ratio",    "interior_images"};

std::string metrics_csv(std::span<const PropertyMetrics> rows);

/// Inputs shared by every property of a run.
struct ComputeContext {
  Vocabulary floorplan_vocabulary = default_vocabulary(MaskFlavor::FloorPlan);
  Vocabulary interior_vocabulary = default_vocabulary(MaskFlavor::Interior);
  std::filesystem::path floorplan_dir = ".";
  std::filesystem::path interior_dir = ".";
  double grid_interval_m = kDefaultGridIntervalM;
  unsigned visibility_workers = 1;
};

ComputeContext make_context(const RunConfig& config);

struct PropertyOutcome {
  std::string property_id;
  std::optional<PropertyMetrics> metrics;
  GrayImage heatmap;
  bool undersampled = false;  ///< grid interval finer than one pixel
  std::string failed_stage;  ///< "floorplan" or "interior" when metrics is absent
  std::string error;
};

/// ingest -> binarize -> calibrate -> grid -> visibility -> summarize, and
/// interiors -> ratios -> aggregate. Failures are captured, never thrown.
PropertyOutcome compute_property(const PropertyRecord& record, const ComputeContext& context);

struct ComputeSummary {
  FunnelReport funnel;
  std::size_t computed = 0;
  std::size_t failed = 0;
  std::size_t undersampled = 0;
  std::filesystem::path out_dir;
};

/// Runs the funnel and per-property computation, writing metrics.csv,
/// errors.csv, funnel.csv, heatmaps/<id>.png and manifest.json under the
/// output directory. Rows are ordered by property id.
/// Throws ConfigError / IoError / FormatError only for run-level problems.
ComputeSummary run_compute(const RunConfig& config);

struct AnalyticsSummary {
  std::vector<std::filesystem::path> written;
};

/// Reads a metrics table and writes trends.csv, trend_summary.csv,
/// regions.csv and correlation_{pearson,spearman}[_matrix].csv as configured.
AnalyticsSummary run_analytics(const RunConfig& config, const std::filesystem::path& metrics_path);

/// Funnel only; writes funnel.csv and returns the report.
FunnelReport run_funnel_report(const RunConfig& config);

/// Computes one property's heatmap and writes it to `output`.
void render_property(const RunConfig& config, std::string_view property_id, const std::filesystem::path& output);

/// File-name-safe form of a property id.
std::string sanitize_id(std::string_view id);

/// Lower-case hex SHA-256 of a byte string / file.
std::string sha256_hex(std::string_view bytes);
std::optional<std::string> sha256_file(const std::filesystem::path& path);

}  // namespace openness
