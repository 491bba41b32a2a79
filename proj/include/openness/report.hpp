#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "openness/analytics.hpp"

namespace openness::report {

// Delimited-text renderers for the analytics outputs. Column order is fixed
// and every real number is printed with six decimals so that outputs can be
// compared byte for byte. Missing values are empty fields.

/// stage,predicate,input_count,surviving_count,surviving_percent
std::string funnel_csv(const FunnelReport& report);

/// indicator,decade,count,mean,std
std::string trend_bins_csv(std::span<const TrendTable> trends);

/// indicator,n,excluded_missing,slope,intercept,p_value,stars
std::string trend_summary_csv(std::span<const TrendTable> trends);

/// indicator,region_key,count,mean,std
std::string regions_csv(std::span<const std::pair<std::string, std::vector<RegionStats>>> regions);

/// column_a,column_b,n,r,p_value,stars for every ordered pair.
std::string correlation_pairs_csv(const CorrelationMatrix& matrix);

/// Square matrix of r with a leading label column.
std::string correlation_square_csv(const CorrelationMatrix& matrix);

}  // namespace openness::report
