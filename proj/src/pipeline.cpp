#include "openness/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <memory>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "openness/error.hpp"
#include "openness/report.hpp"
#include "openness/table.hpp"

namespace openness {
namespace {

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
}

std::vector<PropertyRecord> load_records(const RunConfig& config) {
  if (config.metadata.empty()) throw ConfigError("no metadata path configured");
  return read_metadata(config.resolve(config.metadata));
}

std::pair<std::vector<PropertyRecord>, FunnelReport> apply_default_funnel(const RunConfig& config,
                                                                          std::vector<PropertyRecord> records) {
  const auto predicates = default_predicates(config.min_year, config.regions);
  return run_funnel(std::move(records), predicates);
}

// Splits `workers` between concurrent properties and the visibility kernel.
std::pair<unsigned, unsigned> split_workers(unsigned workers, std::size_t jobs) {
  workers = std::max(1u, workers);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, jobs)));
  const unsigned inner = std::max(1u, workers / outer);
  return {outer, inner};
}

std::vector<PropertyOutcome> compute_all(std::span<const PropertyRecord> records, ComputeContext context,
                                         unsigned workers) {
  const auto [outer, inner] = split_workers(workers, records.size());
  context.visibility_workers = inner;
  std::vector<PropertyOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) {
      outcomes[i] = compute_property(records[i], context);
    }
  };
  if (outer == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < outer; ++w) pool.emplace_back(run);
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const PropertyOutcome& a, const PropertyOutcome& b) { return a.property_id < b.property_id; });
  return outcomes;
}

}  // namespace

std::string sanitize_id(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (const char ch : id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
    out.push_back(safe ? ch : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::optional<std::string> sha256_file(const std::filesystem::path& path) {
  try {
    return sha256_hex(csv::read_text_file(path));
  } catch (const IoError&) {
    return std::nullopt;
  }
}

std::string metrics_csv(std::span<const PropertyMetrics> rows) {
  std::vector<std::string> header(kMetricsColumns.begin(), kMetricsColumns.end());
  std::string out = csv::format_row(header);
  for (const auto& m : rows) {
    const auto& rec = m.record;
    const auto& v = m.visibility;
    std::vector<std::string> f;
    f.reserve(kMetricsColumns.size());
    f.push_back(rec.property_id);
    f.push_back(rec.region_key);
    f.push_back(csv::fixed6(rec.rent));
    f.push_back(csv::fixed6(rec.floor_area_m2));
    f.push_back(std::to_string(rec.construction_year));
    f.push_back(csv::fixed6(rec.latitude));
    f.push_back(csv::fixed6(rec.longitude));
    f.push_back(csv::fixed6(m.calibration.meters_per_pixel));
    f.push_back(std::to_string(m.grid_cols));
    f.push_back(std::to_string(m.grid_rows));
    f.push_back(std::to_string(v.node_count));
    f.push_back(csv::fixed6(v.mean_visibility));
    f.push_back(csv::fixed6(v.std_visibility));
    f.push_back(std::to_string(v.min_visibility));
    f.push_back(std::to_string(v.max_visibility));
    f.push_back(std::to_string(v.median_visibility));
    f.push_back(csv::fixed6(v.mean_relative));
    if (m.ratios) {
      f.push_back(csv::fixed6(m.ratios->wall));
      f.push_back(csv::fixed6(m.ratios->ceiling));
      f.push_back(csv::fixed6(m.ratios->floor));
      f.push_back(csv::fixed6(m.ratios->window));
      f.push_back(csv::fixed6(m.ratios->other));
    } else {
      f.insert(f.end(), 5, std::string{});
    }
    f.push_back(std::to_string(m.interior_images));
    out += csv::format_row(f);
  }
  return out;
}

ComputeContext make_context(const RunConfig& config) {
  ComputeContext ctx;
  if (!config.floorplan_class_map.empty()) {
    ctx.floorplan_vocabulary = load_vocabulary(config.resolve(config.floorplan_class_map));
  }
  if (!config.interior_class_map.empty()) {
    ctx.interior_vocabulary = load_vocabulary(config.resolve(config.interior_class_map));
  }
  validate_vocabulary(ctx.floorplan_vocabulary, MaskFlavor::FloorPlan);
  validate_vocabulary(ctx.interior_vocabulary, MaskFlavor::Interior);
  const auto metadata_dir = config.resolve(config.metadata).parent_path();
  ctx.floorplan_dir = config.floorplan_dir.empty() ? metadata_dir : config.resolve(config.floorplan_dir);
  ctx.interior_dir = config.interior_dir.empty() ? metadata_dir : config.resolve(config.interior_dir);
  ctx.grid_interval_m = config.grid_interval_m;
  ctx.visibility_workers = std::max(1u, config.workers);
  return ctx;
}

PropertyOutcome compute_property(const PropertyRecord& record, const ComputeContext& context) {
  PropertyOutcome outcome;
  outcome.property_id = record.property_id;
  PropertyMetrics metrics;
  metrics.record = record;

  std::string stage = "floorplan";
  try {
    if (record.floorplan_mask.empty()) throw FormatError("no floor-plan mask listed");
    const auto plan = parse_class_mask(context.floorplan_dir / record.floorplan_mask, context.floorplan_vocabulary,
                                       MaskFlavor::FloorPlan);
    const auto occupancy = binarize_floorplan(plan);
    metrics.calibration = calibrate(occupancy, record.floor_area_m2);
    outcome.undersampled = context.grid_interval_m < metrics.calibration.meters_per_pixel;
    const auto grid = build_grid(occupancy, metrics.calibration, context.grid_interval_m);
    metrics.grid_cols = grid.cols();
    metrics.grid_rows = grid.rows();
    const auto field = visibility_counts(grid, context.visibility_workers);
    metrics.visibility = summarize(field);
    outcome.heatmap = render_heatmap(field);

    stage = "interior";
    std::vector<ElementRatios> ratios;
    ratios.reserve(record.interior_masks.size());
    for (const auto& name : record.interior_masks) {
      const auto mask = parse_class_mask(context.interior_dir / name, context.interior_vocabulary, MaskFlavor::Interior);
      ratios.push_back(element_ratios(mask));
    }
    metrics.interior_images = ratios.size();
    if (!ratios.empty()) metrics.ratios = aggregate_property_ratios(ratios);
    outcome.metrics = std::move(metrics);
  } catch (const Error& e) {
    outcome.failed_stage = stage;
    outcome.error = e.what();
    outcome.heatmap = {};
  }
  return outcome;
}

ComputeSummary run_compute(const RunConfig& config) {
  validate_config(config);
  const auto context = make_context(config);
  const auto metadata_path = config.resolve(config.metadata);
  auto records = load_records(config);

  ComputeSummary summary;
  auto [survivors, funnel] = apply_default_funnel(config, std::move(records));
  summary.funnel = funnel;
  summary.out_dir = config.resolve(config.out_dir);
  ensure_directory(summary.out_dir);
  ensure_directory(summary.out_dir / "heatmaps");

  const auto outcomes = compute_all(survivors, context, config.workers);

  std::vector<PropertyMetrics> rows;
  std::string errors = csv::format_row(std::vector<std::string>{"property_id", "stage", "message"});
  for (const auto& o : outcomes) {
    if (o.undersampled) ++summary.undersampled;
    if (o.metrics) {
      rows.push_back(*o.metrics);
      write_png_gray(summary.out_dir / "heatmaps" / (sanitize_id(o.property_id) + ".png"), o.heatmap);
    } else {
      errors += csv::format_row(std::vector<std::string>{o.property_id, o.failed_stage, o.error});
    }
  }
  summary.computed = rows.size();
  summary.failed = outcomes.size() - rows.size();

  csv::write_text_file(summary.out_dir / "metrics.csv", metrics_csv(rows));
  csv::write_text_file(summary.out_dir / "errors.csv", errors);
  csv::write_text_file(summary.out_dir / "funnel.csv", report::funnel_csv(summary.funnel));

  // Manifest: content hashes of the effective settings and of every input file.
  nlohmann::ordered_json manifest;
  manifest["tool"] = "openness";
  manifest["config_sha256"] = sha256_hex(canonical_config(config));
  manifest["grid_interval_m"] = config.grid_interval_m;
  manifest["min_year"] = config.min_year;
  manifest["counts"] = {{"records", summary.funnel.original},
                        {"after_funnel", survivors.size()},
                        {"computed", summary.computed},
                        {"failed", summary.failed}};
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  inputs.push_back({{"role", "metadata"}, {"path", config.metadata}, {"sha256", *sha256_file(metadata_path)}});
  std::map<std::string, std::pair<std::string, std::filesystem::path>> files;
  for (const auto& rec : survivors) {
    if (!rec.floorplan_mask.empty()) {
      files.emplace("floorplan:" + rec.floorplan_mask, std::pair{"floorplan", context.floorplan_dir / rec.floorplan_mask});
    }
    for (const auto& m : rec.interior_masks) {
      files.emplace("interior:" + m, std::pair{"interior", context.interior_dir / m});
    }
  }
  for (const auto& [key, entry] : files) {
    const auto hash = sha256_file(entry.second);
    inputs.push_back({{"role", entry.first},
                      {"path", key.substr(key.find(':') + 1)},
                      {"sha256", hash ? nlohmann::ordered_json(*hash) : nlohmann::ordered_json(nullptr)}});
  }
  manifest["inputs"] = std::move(inputs);
  csv::write_text_file(summary.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

AnalyticsSummary run_analytics(const RunConfig& config, const std::filesystem::path& metrics_path) {
  validate_config(config);
  const auto table = IndicatorTable::from_csv(csv::read_text_file(metrics_path));
  if (table.size() == 0) throw DomainError(fmt::format("metrics table '{}' has no rows", metrics_path.string()));

  const auto out_dir = config.resolve(config.out_dir);
  ensure_directory(out_dir);
  AnalyticsSummary summary;
  auto emit = [&](const std::string& name, const std::string& text) {
    csv::write_text_file(out_dir / name, text);
    summary.written.push_back(out_dir / name);
  };
  auto wants = [&](std::string_view what) {
    return std::find(config.analytics.begin(), config.analytics.end(), what) != config.analytics.end();
  };
  auto require_columns = [&](const std::vector<std::string>& columns) {
    std::vector<std::string> missing;
    for (const auto& c : columns) {
      if (!table.has_column(c)) missing.push_back(c);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw FormatError(fmt::format("metrics table '{}' lacks required column(s): {}", metrics_path.string(), list));
    }
  };

  if (wants("trends")) {
    const auto indicators = config.trend_indicators.empty() ? default_trend_indicators() : config.trend_indicators;
    auto needed = indicators;
    needed.push_back("construction_year");
    require_columns(needed);
    std::vector<TrendTable> trends;
    for (const auto& ind : indicators) {
      try {
        trends.push_back(decade_trends(table, ind));
      } catch (const DomainError&) {
        TrendTable empty;
        empty.indicator = ind;
        empty.excluded_missing = table.size();
        trends.push_back(std::move(empty));
      }
    }
    emit("trends.csv", report::trend_bins_csv(trends));
    emit("trend_summary.csv", report::trend_summary_csv(trends));
  }
  if (wants("regions")) {
    const auto indicators = config.region_indicators.empty() ? default_region_indicators() : config.region_indicators;
    require_columns(indicators);
    std::vector<std::pair<std::string, std::vector<RegionStats>>> regions;
    for (const auto& ind : indicators) regions.emplace_back(ind, regional_aggregate(table, ind));
    emit("regions.csv", report::regions_csv(regions));
  }
  if (wants("correlation")) {
    const auto columns = config.correlation_columns.empty() ? default_correlation_columns() : config.correlation_columns;
    require_columns(columns);
    for (const auto method : {CorrelationMethod::Pearson, CorrelationMethod::Spearman}) {
      const auto matrix = correlation_matrix(table, columns, method);
      const auto stem = fmt::format("correlation_{}", to_string(method));
      emit(stem + ".csv", report::correlation_pairs_csv(matrix));
      emit(stem + "_matrix.csv", report::correlation_square_csv(matrix));
    }
  }
  return summary;
}

FunnelReport run_funnel_report(const RunConfig& config) {
  validate_config(config);
  auto [survivors, funnel] = apply_default_funnel(config, load_records(config));
  const auto out_dir = config.resolve(config.out_dir);
  ensure_directory(out_dir);
  csv::write_text_file(out_dir / "funnel.csv", report::funnel_csv(funnel));
  return funnel;
}

void render_property(const RunConfig& config, std::string_view property_id, const std::filesystem::path& output) {
  validate_config(config);
  const auto context = make_context(config);
  const auto records = load_records(config);
  const auto it = std::find_if(records.begin(), records.end(),
                               [&](const PropertyRecord& r) { return r.property_id == property_id; });
  if (it == records.end()) throw ConfigError(fmt::format("property '{}' not found in metadata", property_id));

  PropertyRecord plan_only = *it;
  plan_only.interior_masks.clear();
  const auto outcome = compute_property(plan_only, context);
  if (!outcome.metrics) throw DomainError(fmt::format("property '{}': {}", property_id, outcome.error));
  if (output.has_parent_path()) ensure_directory(output.parent_path());
  write_png_gray(output, outcome.heatmap);
}

}  // namespace openness
