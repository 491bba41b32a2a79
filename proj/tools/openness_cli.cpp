// Command-line front end: compute, analyze, funnel, render.
//
// Exit codes: 0 success (possibly with per-property failures recorded in
// errors.csv), 1 usage or configuration error, 2 unreadable or invalid
// required input.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "openness/analytics.hpp"
#include "openness/config.hpp"
#include "openness/error.hpp"
#include "openness/grid.hpp"
#include "openness/mask.hpp"
#include "openness/pipeline.hpp"
#include "openness/vga.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<double> grid_interval_m;
  std::optional<int> min_year;
  std::optional<unsigned> workers;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "Run configuration (key = value lines)");
  if (config_required) opt->required();
  cmd->add_option("--grid-interval-m", flags.grid_interval_m, "Grid interval in meters (default 0.20)");
  cmd->add_option("--min-year", flags.min_year, "Earliest construction year kept by the funnel (default 1960)");
  cmd->add_option("--workers", flags.workers, "Worker threads (default 1)");
  cmd->add_option("--out", flags.out_dir, "Output directory (overrides OPENNESS_OUT_DIR and the config)");
}

openness::RunConfig effective_config(const CommonFlags& flags) {
  openness::RunConfig config;
  if (!flags.config_path.empty()) config = openness::load_config(flags.config_path);
  if (flags.grid_interval_m) config.grid_interval_m = *flags.grid_interval_m;
  if (flags.min_year) config.min_year = *flags.min_year;
  if (flags.workers) config.workers = *flags.workers;
  // Overrides are taken relative to the working directory.
  if (!flags.out_dir.empty()) {
    config.out_dir = std::filesystem::absolute(flags.out_dir).string();
  } else if (const char* env = std::getenv(openness::kOutDirEnv); env != nullptr && *env != '\0') {
    config.out_dir = std::filesystem::absolute(env).string();
  }
  openness::validate_config(config);
  return config;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const openness::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const openness::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial openness toolkit: 2D visibility and 3D element-ratio indicators for floor plans"};
  app.require_subcommand(1);

  CommonFlags compute_flags;
  auto* compute = app.add_subcommand("compute", "Compute per-property indicators, heatmaps and a run manifest");
  add_common(compute, compute_flags, true);

  CommonFlags analyze_flags;
  std::string metrics_path;
  auto* analyze = app.add_subcommand("analyze", "Trend, regional and correlation tables from a metrics table");
  add_common(analyze, analyze_flags, false);
  analyze->add_option("--metrics", metrics_path, "Metrics table (default <out>/metrics.csv)");

  CommonFlags funnel_flags;
  auto* funnel = app.add_subcommand("funnel", "Report the filtering funnel only");
  add_common(funnel, funnel_flags, true);

  CommonFlags render_flags;
  std::string property_id;
  std::string mask_path;
  std::string class_map_path;
  std::optional<double> area_m2;
  std::string output_path;
  auto* render = app.add_subcommand("render", "Write the visibility heatmap of one property or one mask");
  add_common(render, render_flags, false);
  render->add_option("--property", property_id, "Property id looked up in the configured metadata");
  render->add_option("--mask", mask_path, "Floor-plan mask file (instead of --property)");
  render->add_option("--class-map", class_map_path, "Class map for --mask (default: canonical floor-plan ids)");
  render->add_option("--area-m2", area_m2, "Floor area for --mask");
  render->add_option("--output", output_path, "Heatmap PNG path (default <out>/heatmaps/<id>.png)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (compute->parsed()) {
    return run_guarded([&] {
      const auto config = effective_config(compute_flags);
      const auto summary = openness::run_compute(config);
      fmt::print("records: {}  after funnel: {}  computed: {}  failed: {}\n", summary.funnel.original,
                 summary.funnel.final_count(), summary.computed, summary.failed);
      fmt::print("outputs: {}\n", summary.out_dir.string());
      if (summary.undersampled > 0) {
        fmt::print(stderr, "warning: {} plan(s) have a grid interval finer than one pixel\n", summary.undersampled);
      }
      if (summary.failed > 0) {
        fmt::print(stderr, "warning: {} propert{} failed; see {}\n", summary.failed,
                   summary.failed == 1 ? "y" : "ies", (summary.out_dir / "errors.csv").string());
      }
      return 0;
    });
  }

  if (analyze->parsed()) {
    return run_guarded([&] {
      const auto config = effective_config(analyze_flags);
      const auto metrics = metrics_path.empty() ? config.resolve(config.out_dir) / "metrics.csv"
                                                : std::filesystem::path(metrics_path);
      const auto summary = openness::run_analytics(config, metrics);
      for (const auto& p : summary.written) fmt::print("wrote {}\n", p.string());
      return 0;
    });
  }

  if (funnel->parsed()) {
    return run_guarded([&] {
      const auto config = effective_config(funnel_flags);
      const auto report = openness::run_funnel_report(config);
      fmt::print("{:<28} {:>10} {:>10} {:>10}\n", "predicate", "input", "surviving", "share");
      fmt::print("{:<28} {:>10} {:>10} {:>10}\n", "all_records", report.original, report.original,
                 openness::format_percent(report.original == 0 ? 0.0 : 100.0));
      for (const auto& s : report.stages) {
        fmt::print("{:<28} {:>10} {:>10} {:>10}\n", s.name, s.input, s.surviving,
                   openness::format_percent(s.surviving_percent));
      }
      return 0;
    });
  }

  if (render->parsed()) {
    return run_guarded([&] {
      const auto config = effective_config(render_flags);
      if (!property_id.empty()) {
        if (render_flags.config_path.empty()) throw openness::ConfigError("--property requires --config");
        const auto output = output_path.empty()
                                ? config.resolve(config.out_dir) / "heatmaps" / (openness::sanitize_id(property_id) + ".png")
                                : std::filesystem::path(output_path);
        openness::render_property(config, property_id, output);
        fmt::print("wrote {}\n", output.string());
        return 0;
      }
      if (mask_path.empty() || !area_m2 || output_path.empty()) {
        throw openness::ConfigError("render needs --property, or --mask with --area-m2 and --output");
      }
      const auto vocabulary = class_map_path.empty() ? openness::default_vocabulary(openness::MaskFlavor::FloorPlan)
                                                     : openness::load_vocabulary(class_map_path);
      const auto mask = openness::parse_class_mask(mask_path, vocabulary, openness::MaskFlavor::FloorPlan);
      const auto occupancy = openness::binarize_floorplan(mask);
      const auto calibration = openness::calibrate(occupancy, *area_m2);
      const auto grid = openness::build_grid(occupancy, calibration, config.grid_interval_m);
      const auto field = openness::visibility_counts(grid, config.workers);
      openness::write_png_gray(output_path, openness::render_heatmap(field));
      fmt::print("wrote {}\n", output_path);
      return 0;
    });
  }
  return kExitUsage;
}
