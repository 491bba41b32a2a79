#include "openness/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "openness/error.hpp"
#include "openness/table.hpp"

namespace openness {
namespace {

int current_year() {
  const auto today = std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
  return static_cast<int>(today.year());
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

int parse_year(std::string_view field, std::size_t line) {
  const auto v = csv::parse_number(field);
  if (!v || *v != std::floor(*v)) throw FormatError(fmt::format("line {}: construction_year must be an integer", line));
  return static_cast<int>(*v);
}

double require_number(std::string_view field, std::string_view name, std::size_t line) {
  const auto v = csv::parse_number(field);
  if (!v) throw FormatError(fmt::format("line {}: {} is required", line, name));
  return *v;
}

}  // namespace

std::vector<PropertyRecord> parse_metadata_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError("metadata table has no header row");
  const auto& header = rows.front();
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
  for (const auto name : {"property_id", "rent", "floor_area_m2", "construction_year", "region_key", "floorplan_mask"}) {
    if (!index.contains(name)) throw FormatError(fmt::format("metadata table lacks required column '{}'", name));
  }

  std::vector<PropertyRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != header.size()) {
      throw FormatError(fmt::format("line {}: expected {} fields, found {}", line, header.size(), row.size()));
    }
    auto field = [&](std::string_view name) -> std::string_view {
      const auto it = index.find(name);
      return it == index.end() ? std::string_view{} : std::string_view{row[it->second]};
    };
    try {
      PropertyRecord rec;
      rec.property_id = std::string(field("property_id"));
      if (rec.property_id.empty()) throw FormatError("property_id is empty");
      rec.rent = require_number(field("rent"), "rent", line);
      rec.floor_area_m2 = require_number(field("floor_area_m2"), "floor_area_m2", line);
      rec.construction_year = parse_year(field("construction_year"), line);
      rec.region_key = std::string(field("region_key"));
      rec.latitude = csv::parse_number(field("latitude"));
      rec.longitude = csv::parse_number(field("longitude"));
      rec.floorplan_mask = std::string(field("floorplan_mask"));
      rec.interior_masks = split_list(field("interior_masks"), ';');
      records.push_back(std::move(rec));
    } catch (const FormatError& e) {
      const std::string what = e.what();
      if (what.starts_with("line ")) throw;
      throw FormatError(fmt::format("line {}: {}", line, what));
    }
  }
  validate_records(records);
  return records;
}

std::vector<PropertyRecord> parse_metadata_jsonl(std::string_view text) {
  std::vector<PropertyRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(fmt::format("line {}: {}", line_no, e.what()));
    }
    if (!obj.is_object()) throw FormatError(fmt::format("line {}: record must be an object", line_no));

    auto number = [&](const char* key, bool required) -> std::optional<double> {
      if (!obj.contains(key) || obj[key].is_null()) {
        if (required) throw FormatError(fmt::format("line {}: {} is required", line_no, key));
        return std::nullopt;
      }
      const auto& v = obj[key];
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return csv::parse_number(v.get<std::string>());
      throw FormatError(fmt::format("line {}: {} must be numeric", line_no, key));
    };
    auto text_field = [&](const char* key) -> std::string {
      if (!obj.contains(key) || obj[key].is_null()) return {};
      if (!obj[key].is_string()) throw FormatError(fmt::format("line {}: {} must be a string", line_no, key));
      return obj[key].get<std::string>();
    };

    PropertyRecord rec;
    rec.property_id = text_field("property_id");
    if (rec.property_id.empty()) throw FormatError(fmt::format("line {}: property_id is required", line_no));
    rec.rent = *number("rent", true);
    rec.floor_area_m2 = *number("floor_area_m2", true);
    const double year = *number("construction_year", true);
    if (year != std::floor(year)) throw FormatError(fmt::format("line {}: construction_year must be an integer", line_no));
    rec.construction_year = static_cast<int>(year);
    rec.region_key = text_field("region_key");
    rec.latitude = number("latitude", false);
    rec.longitude = number("longitude", false);
    rec.floorplan_mask = text_field("floorplan_mask");
    if (obj.contains("interior_masks") && obj["interior_masks"].is_array()) {
      for (const auto& item : obj["interior_masks"]) {
        if (!item.is_string()) throw FormatError(fmt::format("line {}: interior_masks entries must be strings", line_no));
        rec.interior_masks.push_back(item.get<std::string>());
      }
    } else {
      rec.interior_masks = split_list(text_field("interior_masks"), ';');
    }
    records.push_back(std::move(rec));
  }
  validate_records(records);
  return records;
}

std::vector<PropertyRecord> read_metadata(const std::filesystem::path& path) {
  const auto text = csv::read_text_file(path);
  const auto ext = path.extension().string();
  try {
    if (ext == ".jsonl" || ext == ".ndjson") return parse_metadata_jsonl(text);
    return parse_metadata_csv(text);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void validate_records(std::span<const PropertyRecord> records) {
  const int max_year = current_year();
  std::set<std::string_view> seen;
  for (const auto& rec : records) {
    if (!seen.insert(rec.property_id).second) throw FormatError(fmt::format("duplicate property_id '{}'", rec.property_id));
    if (!(rec.rent > 0.0)) throw FormatError(fmt::format("property '{}': rent must be positive", rec.property_id));
    if (!(rec.floor_area_m2 > 0.0)) {
      throw FormatError(fmt::format("property '{}': floor_area_m2 must be positive", rec.property_id));
    }
    if (rec.construction_year < 1900 || rec.construction_year > max_year) {
      throw FormatError(fmt::format("property '{}': construction_year {} outside [1900, {}]", rec.property_id,
                                    rec.construction_year, max_year));
    }
  }
}

std::pair<std::vector<PropertyRecord>, FunnelReport> run_funnel(std::vector<PropertyRecord> records,
                                                                std::span<const NamedPredicate> predicates) {
  FunnelReport report;
  report.original = records.size();
  for (const auto& predicate : predicates) {
    FunnelStage stage;
    stage.name = predicate.name;
    stage.input = records.size();
    std::erase_if(records, [&](const PropertyRecord& r) { return !predicate.keep(r); });
    stage.surviving = records.size();
    const double raw = report.original == 0
                           ? 0.0
                           : static_cast<double>(stage.surviving) / static_cast<double>(report.original) * 100.0;
    stage.surviving_percent = std::round(raw * 100.0) / 100.0;
    report.stages.push_back(std::move(stage));
  }
  return {std::move(records), std::move(report)};
}

std::string format_percent(double percent) { return fmt::format("{:.2f}%", percent); }

std::vector<NamedPredicate> default_predicates(int min_year, std::vector<std::string> regions) {
  std::vector<NamedPredicate> predicates;
  predicates.push_back({fmt::format("built_since_{}", min_year),
                        [min_year](const PropertyRecord& r) { return r.construction_year >= min_year; }});
  predicates.push_back({"region_in_allow_list", [allowed = std::set<std::string>(regions.begin(), regions.end())](
                                                    const PropertyRecord& r) {
                          return allowed.empty() || allowed.contains(r.region_key);
                        }});
  predicates.push_back(
      {"has_interior_image", [](const PropertyRecord& r) { return !r.interior_masks.empty(); }});
  return predicates;
}

// ---------------------------------------------------------------------------

IndicatorTable::IndicatorTable(std::vector<std::string> numeric_columns) : columns_(std::move(numeric_columns)) {
  std::set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(c).second) throw FormatError(fmt::format("duplicate column '{}'", c));
  }
  data_.resize(columns_.size());
}

void IndicatorTable::add_row(std::string property_id, std::string region_key,
                             std::vector<std::optional<double>> values) {
  if (values.size() != columns_.size()) {
    throw FormatError(fmt::format("row '{}' has {} values, expected {}", property_id, values.size(), columns_.size()));
  }
  if (id_index_.contains(property_id)) throw FormatError(fmt::format("duplicate property_id '{}'", property_id));
  id_index_.emplace(property_id, ids_.size());
  ids_.push_back(std::move(property_id));
  regions_.push_back(std::move(region_key));
  for (std::size_t c = 0; c < columns_.size(); ++c) data_[c].push_back(values[c]);
}

bool IndicatorTable::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t IndicatorTable::column_index(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw FormatError(fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - columns_.begin());
}

std::span<const std::optional<double>> IndicatorTable::column(std::string_view name) const {
  return data_[column_index(name)];
}

IndicatorTable IndicatorTable::from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError("indicator table has no header row");
  const auto& header = rows.front();
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> region_col;
  std::vector<std::string> numeric;
  std::vector<std::size_t> numeric_src;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "property_id") {
      id_col = i;
    } else if (header[i] == "region_key") {
      region_col = i;
    } else {
      numeric.push_back(header[i]);
      numeric_src.push_back(i);
    }
  }
  if (!id_col) throw FormatError("missing column 'property_id'");

  IndicatorTable table(std::move(numeric));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw FormatError(fmt::format("line {}: expected {} fields, found {}", r + 1, header.size(), row.size()));
    }
    std::vector<std::optional<double>> values;
    values.reserve(numeric_src.size());
    for (const auto src : numeric_src) {
      try {
        values.push_back(csv::parse_number(row[src]));
      } catch (const FormatError& e) {
        throw FormatError(fmt::format("line {}, column '{}': {}", r + 1, header[src], e.what()));
      }
    }
    table.add_row(row[*id_col], region_col ? row[*region_col] : std::string{}, std::move(values));
  }
  return table;
}

// ---------------------------------------------------------------------------

TrendTable decade_trends(const IndicatorTable& table, std::string_view indicator, std::string_view year_column) {
  const auto values = table.column(indicator);
  const auto years = table.column(year_column);

  TrendTable out;
  out.indicator = std::string(indicator);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (values[i] && years[i]) {
      xs.push_back(*years[i]);
      ys.push_back(*values[i]);
    } else {
      ++out.excluded_missing;
    }
  }
  out.used = xs.size();
  if (xs.empty()) throw DomainError(fmt::format("indicator '{}' has no non-missing values", indicator));

  auto decade_of = [](double year) { return static_cast<int>(std::floor(year / 10.0)) * 10; };
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const int first = decade_of(*lo);
  const int last = decade_of(*hi);
  std::vector<std::vector<double>> members(static_cast<std::size_t>((last - first) / 10 + 1));
  for (std::size_t i = 0; i < xs.size(); ++i) members[static_cast<std::size_t>((decade_of(xs[i]) - first) / 10)].push_back(ys[i]);

  for (std::size_t b = 0; b < members.size(); ++b) {
    DecadeBin bin;
    bin.decade = first + static_cast<int>(b) * 10;
    bin.count = members[b].size();
    if (bin.count >= 1) bin.mean = stats::mean(members[b]);
    if (bin.count >= 2) bin.std = stats::sample_std(members[b]);
    out.bins.push_back(bin);
  }

  const bool years_vary = *lo != *hi;
  if (xs.size() >= 3 && years_vary) {
    out.fit = stats::ols_trend(xs, ys);
    out.stars = stats::stars(out.fit->p_value);
  }
  return out;
}

std::vector<RegionStats> regional_aggregate(const IndicatorTable& table, std::string_view indicator) {
  const auto values = table.column(indicator);
  const auto regions = table.regions();
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (values[i] && !regions[i].empty()) groups[regions[i]].push_back(*values[i]);
  }
  std::vector<RegionStats> out;
  out.reserve(groups.size());
  for (const auto& [region, vals] : groups) {
    RegionStats s;
    s.region = region;
    s.count = vals.size();
    s.mean = stats::mean(vals);
    if (vals.size() >= 2) s.std = stats::sample_std(vals);
    out.push_back(std::move(s));
  }
  return out;
}

CorrelationMatrix correlation_matrix(const IndicatorTable& table, std::span<const std::string> columns,
                                     CorrelationMethod method) {
  CorrelationMatrix m;
  m.method = method;
  m.columns.assign(columns.begin(), columns.end());
  const std::size_t k = columns.size();
  m.cells.resize(k * k);

  std::vector<std::span<const std::optional<double>>> data;
  data.reserve(k);
  for (const auto& c : columns) data.push_back(table.column(c));

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (std::size_t row = 0; row < table.size(); ++row) {
        if (data[i][row] && data[j][row]) {
          xs.push_back(*data[i][row]);
          ys.push_back(*data[j][row]);
        }
      }
      CorrelationCell cell;
      cell.n = xs.size();
      if (xs.size() >= 3) {
        try {
          if (i == j) {
            // Validates non-constancy; the diagonal is pinned to exactly 1.
            (void)stats::pearson(xs, ys);
            cell.r = 1.0;
            cell.p_value = 0.0;
          } else {
            const auto c = method == CorrelationMethod::Pearson ? stats::pearson(xs, ys) : stats::spearman(xs, ys);
            cell.r = c.r;
            cell.p_value = c.p_value;
          }
        } catch (const DomainError&) {
          // constant series: leave the cell missing
        }
      }
      m.cells[i * k + j] = cell;
      m.cells[j * k + i] = cell;
    }
  }
  return m;
}

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::Pearson ? "pearson" : "spearman";
}

}  // namespace openness
