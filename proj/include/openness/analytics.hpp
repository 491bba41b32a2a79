#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openness/stats.hpp"

namespace openness {

/// One rental unit and its input files.
struct PropertyRecord {
  std::string property_id;
  double rent = 0.0;  ///< per month
  double floor_area_m2 = 0.0;
  int construction_year = 0;
  std::string region_key;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::string floorplan_mask;
  std::vector<std::string> interior_masks;
};

/// Metadata columns, in the order the CSV reader expects to find them by name.
/// `interior_masks` holds ';'-separated file references.
inline constexpr std::array<std::string_view, 9> kMetadataColumns{
    "property_id", "rent",      "floor_area_m2",  "construction_year", "region_key",
    "latitude",    "longitude", "floorplan_mask", "interior_masks"};

/// Parses the comma-separated metadata table (header row required).
std::vector<PropertyRecord> parse_metadata_csv(std::string_view text);
/// Parses line-delimited JSON records carrying the same fields;
/// `interior_masks` may be an array or a ';'-separated string.
std::vector<PropertyRecord> parse_metadata_jsonl(std::string_view text);
/// Dispatches on extension: `.jsonl` / `.ndjson` are JSON lines, everything else CSV.
std::vector<PropertyRecord> read_metadata(const std::filesystem::path& path);

/// Throws FormatError for duplicate ids, non-positive rent or area, or a
/// construction year outside [1900, current year].
void validate_records(std::span<const PropertyRecord> records);

// ---------------------------------------------------------------------------
// Filtering funnel

struct NamedPredicate {
  std::string name;
  std::function<bool(const PropertyRecord&)> keep;
};

struct FunnelStage {
  std::string name;
  std::size_t input = 0;
  std::size_t surviving = 0;
  double surviving_percent = 0.0;  ///< surviving / original * 100, rounded to 2 decimals
};

struct FunnelReport {
  std::size_t original = 0;
  std::vector<FunnelStage> stages;

  std::size_t final_count() const { return stages.empty() ? original : stages.back().surviving; }
};

/// Applies predicates in the given order. Never throws for empty survivors.
std::pair<std::vector<PropertyRecord>, FunnelReport> run_funnel(std::vector<PropertyRecord> records,
                                                                std::span<const NamedPredicate> predicates);

/// "0.52%"-style label: two decimals followed by a percent sign.
std::string format_percent(double percent);

/// built after `min_year`, region in `regions` (empty list accepts every
/// region), and at least one interior image.
std::vector<NamedPredicate> default_predicates(int min_year, std::vector<std::string> regions);

// ---------------------------------------------------------------------------
// Indicator table

/// Rows keyed by property id with a region label and named numeric columns.
/// Missing values are std::nullopt, never zero.
class IndicatorTable {
 public:
  explicit IndicatorTable(std::vector<std::string> numeric_columns);

  /// Throws FormatError on a duplicate id or a row of the wrong width.
  void add_row(std::string property_id, std::string region_key, std::vector<std::optional<double>> values);

  std::size_t size() const { return ids_.size(); }
  std::span<const std::string> ids() const { return ids_; }
  std::span<const std::string> regions() const { return regions_; }
  std::span<const std::string> columns() const { return columns_; }
  bool has_column(std::string_view name) const;
  /// Throws FormatError naming the column when it does not exist.
  std::span<const std::optional<double>> column(std::string_view name) const;

  /// Reads a metrics table; `property_id` and `region_key` are text, every
  /// other column numeric. Empty fields are missing.
  static IndicatorTable from_csv(std::string_view text);

 private:
  std::size_t column_index(std::string_view name) const;

  std::vector<std::string> columns_;
  std::vector<std::string> ids_;
  std::vector<std::string> regions_;
  std::vector<std::vector<std::optional<double>>> data_;  // column-major
  std::map<std::string, std::size_t, std::less<>> id_index_;
};

// ---------------------------------------------------------------------------
// Trends, regions, correlations

struct DecadeBin {
  int decade = 0;  ///< first year of the bin; label "<decade>s"
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> std;  ///< sample (ddof = 1); absent when count < 2
};

struct TrendTable {
  std::string indicator;
  std::vector<DecadeBin> bins;  ///< every decade from the earliest to the latest observed
  std::size_t used = 0;
  std::size_t excluded_missing = 0;
  std::optional<stats::TrendFit> fit;  ///< absent when fewer than 3 rows or all years equal
  std::string stars;
};

TrendTable decade_trends(const IndicatorTable& table, std::string_view indicator,
                         std::string_view year_column = "construction_year");

struct RegionStats {
  std::string region;
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> std;  ///< sample (ddof = 1); absent when count < 2
};

/// Group-by region in lexicographic order; rows with a missing value or an
/// empty region key are skipped.
std::vector<RegionStats> regional_aggregate(const IndicatorTable& table, std::string_view indicator);

enum class CorrelationMethod { Pearson, Spearman };

struct CorrelationCell {
  std::optional<double> r;
  std::optional<double> p_value;
  std::size_t n = 0;  ///< pairwise-complete observations
};

/// Square, symmetric matrix over `columns`; each cell uses the rows where
/// both columns are present. Cells with fewer than 3 such rows, or a
/// constant series, are missing.
struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::Pearson;
  std::vector<std::string> columns;
  std::vector<CorrelationCell> cells;  ///< row-major k x k

  const CorrelationCell& at(std::size_t i, std::size_t j) const { return cells[i * columns.size() + j]; }
};

CorrelationMatrix correlation_matrix(const IndicatorTable& table, std::span<const std::string> columns,
                                     CorrelationMethod method = CorrelationMethod::Pearson);

std::string_view to_string(CorrelationMethod method);

}  // namespace openness
