#include "openness/report.hpp"

#include <fmt/format.h>

#include "openness/table.hpp"

namespace openness::report {
namespace {

std::string row(std::initializer_list<std::string> fields) {
  return csv::format_row(std::vector<std::string>(fields));
}

std::string optional_stars(const std::optional<double>& p) { return p ? stats::stars(*p) : std::string{}; }

}  // namespace

std::string funnel_csv(const FunnelReport& report) {
  std::string out = row({"stage", "predicate", "input_count", "surviving_count", "surviving_percent"});
  out += row({"0", "all_records", std::to_string(report.original), std::to_string(report.original),
              format_percent(report.original == 0 ? 0.0 : 100.0)});
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    const auto& s = report.stages[i];
    out += row({std::to_string(i + 1), s.name, std::to_string(s.input), std::to_string(s.surviving),
                format_percent(s.surviving_percent)});
  }
  return out;
}

std::string trend_bins_csv(std::span<const TrendTable> trends) {
  std::string out = row({"indicator", "decade", "count", "mean", "std"});
  for (const auto& t : trends) {
    for (const auto& b : t.bins) {
      out += row({t.indicator, fmt::format("{}s", b.decade), std::to_string(b.count), csv::fixed6(b.mean),
                  csv::fixed6(b.std)});
    }
  }
  return out;
}

std::string trend_summary_csv(std::span<const TrendTable> trends) {
  std::string out = row({"indicator", "n", "excluded_missing", "slope", "intercept", "p_value", "stars"});
  for (const auto& t : trends) {
    if (t.fit) {
      out += row({t.indicator, std::to_string(t.used), std::to_string(t.excluded_missing), csv::fixed6(t.fit->slope),
                  csv::fixed6(t.fit->intercept), csv::fixed6(t.fit->p_value), t.stars});
    } else {
      out += row({t.indicator, std::to_string(t.used), std::to_string(t.excluded_missing), "", "", "", ""});
    }
  }
  return out;
}

std::string regions_csv(std::span<const std::pair<std::string, std::vector<RegionStats>>> regions) {
  std::string out = row({"indicator", "region_key", "count", "mean", "std"});
  for (const auto& [indicator, groups] : regions) {
    for (const auto& g : groups) {
      out += row({indicator, g.region, std::to_string(g.count), csv::fixed6(g.mean), csv::fixed6(g.std)});
    }
  }
  return out;
}

std::string correlation_pairs_csv(const CorrelationMatrix& matrix) {
  std::string out = row({"column_a", "column_b", "n", "r", "p_value", "stars"});
  const auto k = matrix.columns.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& c = matrix.at(i, j);
      out += row({matrix.columns[i], matrix.columns[j], std::to_string(c.n), csv::fixed6(c.r),
                  csv::fixed6(c.p_value), i == j ? std::string{} : optional_stars(c.p_value)});
    }
  }
  return out;
}

std::string correlation_square_csv(const CorrelationMatrix& matrix) {
  std::vector<std::string> header{"column"};
  header.insert(header.end(), matrix.columns.begin(), matrix.columns.end());
  std::string out = csv::format_row(header);
  const auto k = matrix.columns.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> fields{matrix.columns[i]};
    for (std::size_t j = 0; j < k; ++j) fields.push_back(csv::fixed6(matrix.at(i, j).r));
    out += csv::format_row(fields);
  }
  return out;
}

}  // namespace openness::report
