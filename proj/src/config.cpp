#include "openness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "openness/error.hpp"
#include "openness/table.hpp"

namespace openness {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(',', start);
    if (end == std::string_view::npos) end = value.size();
    const auto item = trim(value.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("config key '{}': '{}' is not an integer", key, value));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  return base_dir / p;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig config;
  config.base_dir = base_dir.empty() ? std::filesystem::path(".") : base_dir;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "metadata") {
      config.metadata = value;
    } else if (key == "floorplan_dir") {
      config.floorplan_dir = value;
    } else if (key == "interior_dir") {
      config.interior_dir = value;
    } else if (key == "floorplan_class_map") {
      config.floorplan_class_map = value;
    } else if (key == "interior_class_map") {
      config.interior_class_map = value;
    } else if (key == "grid_interval_m") {
      try {
        const auto v = csv::parse_number(value);
        if (!v) throw FormatError("empty");
        config.grid_interval_m = *v;
      } catch (const FormatError&) {
        throw ConfigError(fmt::format("config key 'grid_interval_m': '{}' is not a number", value));
      }
    } else if (key == "min_year") {
      config.min_year = parse_integer<int>(key, value);
    } else if (key == "regions") {
      config.regions = parse_list(value);
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "workers") {
      config.workers = parse_integer<unsigned>(key, value);
    } else if (key == "analytics") {
      config.analytics = parse_list(value);
    } else if (key == "trend_indicators") {
      config.trend_indicators = parse_list(value);
    } else if (key == "region_indicators") {
      config.region_indicators = parse_list(value);
    } else if (key == "correlation_columns") {
      config.correlation_columns = parse_list(value);
    } else {
      throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  auto base = path.parent_path();
  return parse_config(text, base.empty() ? std::filesystem::path(".") : base);
}

void validate_config(const RunConfig& config) {
  if (!(config.grid_interval_m > 0.0) || !std::isfinite(config.grid_interval_m)) {
    throw ConfigError(fmt::format("grid interval must be positive, got {}", config.grid_interval_m));
  }
  if (config.workers < 1) throw ConfigError("worker count must be at least 1");
  for (const auto& a : config.analytics) {
    if (a != "trends" && a != "regions" && a != "correlation") {
      throw ConfigError(fmt::format("unknown analytics '{}' (expected trends, regions, correlation)", a));
    }
  }
  if (config.out_dir.empty()) throw ConfigError("output directory is empty");
}

std::string canonical_config(const RunConfig& config) {
  std::string out;
  out += fmt::format("metadata={}\n", config.metadata);
  out += fmt::format("floorplan_dir={}\n", config.floorplan_dir);
  out += fmt::format("interior_dir={}\n", config.interior_dir);
  out += fmt::format("floorplan_class_map={}\n", config.floorplan_class_map);
  out += fmt::format("interior_class_map={}\n", config.interior_class_map);
  out += fmt::format("grid_interval_m={:.17g}\n", config.grid_interval_m);
  out += fmt::format("min_year={}\n", config.min_year);
  out += fmt::format("regions={}\n", join(config.regions));
  out += fmt::format("analytics={}\n", join(config.analytics));
  out += fmt::format("trend_indicators={}\n", join(config.trend_indicators));
  out += fmt::format("region_indicators={}\n", join(config.region_indicators));
  out += fmt::format("correlation_columns={}\n", join(config.correlation_columns));
  return out;
}

std::vector<std::string> default_trend_indicators() {
  return {"mean_visibility", "std_visibility", "mean_relative", "wall_ratio",
          "ceiling_ratio",   "floor_ratio",    "window_ratio"};
}

std::vector<std::string> default_region_indicators() {
  auto out = default_trend_indicators();
  out.insert(out.end(), {"rent", "floor_area_m2", "construction_year"});
  return out;
}

std::vector<std::string> default_correlation_columns() { return default_region_indicators(); }

}  // namespace openness
