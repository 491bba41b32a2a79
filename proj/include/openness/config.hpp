#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "openness/grid.hpp"

namespace openness {

/// Settings for a batch run. Paths are kept as written and resolved against
/// `base_dir` (the directory of the config file) when used.
struct RunConfig {
  std::filesystem::path base_dir = ".";
  std::string metadata;
  std::string floorplan_dir;
  std::string interior_dir;
  std::string floorplan_class_map;  ///< empty: default floor-plan vocabulary
  std::string interior_class_map;   ///< empty: default interior vocabulary
  double grid_interval_m = kDefaultGridIntervalM;
  int min_year = 1960;
  std::vector<std::string> regions;  ///< empty: accept every region
  std::string out_dir = "openness_out";
  unsigned workers = 1;
  std::vector<std::string> analytics{"trends", "regions", "correlation"};
  std::vector<std::string> trend_indicators;
  std::vector<std::string> region_indicators;
  std::vector<std::string> correlation_columns;

  std::filesystem::path resolve(const std::string& path) const;
};

/// `key = value` lines; '#' starts a comment; list values are comma separated.
/// Unknown keys and malformed values raise ConfigError.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// Checks interval > 0, workers >= 1 and known analytics names.
void validate_config(const RunConfig& config);

/// Stable rendering of every setting that influences results (excludes the
/// output directory and worker count). Hashed into the run manifest.
std::string canonical_config(const RunConfig& config);

std::vector<std::string> default_trend_indicators();
std::vector<std::string> default_region_indicators();
std::vector<std::string> default_correlation_columns();

/// Name of the environment variable that overrides `out_dir`.
inline constexpr const char* kOutDirEnv = "OPENNESS_OUT_DIR";

}  // namespace openness
