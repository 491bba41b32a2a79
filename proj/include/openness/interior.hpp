#pragma once

#include <cstddef>
#include <span>

#include "openness/mask.hpp"

namespace openness {

/// 3D openness indicators: fractions of the visible (non-void) pixels of an
/// interior image falling in each architectural bucket.
struct ElementRatios {
  double wall = 0.0;
  double ceiling = 0.0;
  double floor = 0.0;
  double window = 0.0;
  double other = 0.0;
  std::size_t denominator = 0;

  double sum() const { return wall + ceiling + floor + window + other; }
};

/// fraction(c) = pixels(c) / non-void pixels. Throws DomainError for a
/// floor-plan mask or a mask with no visible pixel.
ElementRatios element_ratios(const ClassMask& mask);

/// Unweighted mean of each fraction, renormalized to sum to one; the
/// denominator is the sum of the inputs' denominators.
ElementRatios aggregate_property_ratios(std::span<const ElementRatios> ratios);

}  // namespace openness
