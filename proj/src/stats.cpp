#include "openness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "openness/error.hpp"

namespace openness::stats {
namespace {

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

void require_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DomainError(fmt::format("series length mismatch: {} vs {}", x.size(), y.size()));
  }
  if (x.size() < 3) throw DomainError(fmt::format("at least 3 observations required, got {}", x.size()));
}

struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
  Moments m;
  m.mean_x = mean(x);
  m.mean_y = mean(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta requires a, b > 0");
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw DomainError("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw DomainError("Student t requires positive degrees of freedom");
  if (std::isnan(t)) throw DomainError("Student t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("sample standard deviation needs at least two values");
  const double m = mean(values);
  double squares = 0.0;
  for (const double v : values) squares += (v - m) * (v - m);
  return std::sqrt(squares / static_cast<double>(values.size() - 1));
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  if (is_constant(x) || is_constant(y)) throw DomainError("correlation is undefined for a constant series");
  const auto m = centered_moments(x, y);
  if (!(m.sxx > 0.0) || !(m.syy > 0.0)) throw DomainError("correlation is undefined for a constant series");

  Correlation c;
  c.n = x.size();
  c.r = std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
  const double df = static_cast<double>(c.n - 2);
  const double one_minus_r2 = 1.0 - c.r * c.r;
  if (one_minus_r2 <= 0.0) {
    c.p_value = 0.0;
  } else {
    c.p_value = student_t_two_sided_p(c.r * std::sqrt(df / one_minus_r2), df);
  }
  return c;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

TrendFit ols_trend(std::span<const double> years, std::span<const double> values) {
  require_pair(years, values);
  if (is_constant(years)) throw DomainError("trend is undefined when all years are equal");

  TrendFit fit;
  fit.n = years.size();
  if (is_constant(values)) {
    fit.slope = 0.0;
    fit.intercept = values.front();
    fit.p_value = 1.0;
    return fit;
  }
  const auto m = centered_moments(years, values);
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;

  double sse = 0.0;
  for (std::size_t i = 0; i < years.size(); ++i) {
    const double resid = (values[i] - m.mean_y) - fit.slope * (years[i] - m.mean_x);
    sse += resid * resid;
  }
  const double df = static_cast<double>(fit.n - 2);
  if (sse <= 0.0) {
    fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
    return fit;
  }
  const double se = std::sqrt(sse / df / m.sxx);
  fit.p_value = student_t_two_sided_p(fit.slope / se, df);
  return fit;
}

std::string stars(double p_value) {
  if (std::isnan(p_value) || p_value < 0.0 || p_value > 1.0) {
    throw DomainError(fmt::format("p-value {} is outside [0, 1]", p_value));
  }
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

}  // namespace openness::stats
