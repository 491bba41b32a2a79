#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace openness::stats {

/// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued
/// fraction on whichever tail converges faster.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Product-moment correlation with a two-sided t-test on n - 2 degrees of
/// freedom. Throws DomainError on length mismatch, n < 3, or a constant series.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Ranks starting at 1; ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Simple least-squares fit values ~ years with a two-sided t-test on the
/// slope. Constant values give slope 0 and p 1.
TrendFit ols_trend(std::span<const double> years, std::span<const double> values);

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
std::string stars(double p_value);

/// Arithmetic mean; the caller guarantees a non-empty span.
double mean(std::span<const double> values);

/// Sample standard deviation (ddof = 1); requires at least two values.
double sample_std(std::span<const double> values);

}  // namespace openness::stats
