#include "openness/interior.hpp"

#include <array>

#include "openness/error.hpp"

namespace openness {

ElementRatios element_ratios(const ClassMask& mask) {
  if (mask.flavor() != MaskFlavor::Interior) throw DomainError("element_ratios requires an interior mask");

  std::array<std::size_t, 256> per_label{};
  for (const auto label : mask.labels()) ++per_label[label];

  std::size_t wall = 0, ceiling = 0, floor = 0, window = 0, other = 0;
  for (const auto& [id, cls] : mask.vocabulary()) {
    const auto n = per_label[id];
    switch (cls) {
      case SemanticClass::Wall: wall += n; break;
      case SemanticClass::Ceiling: ceiling += n; break;
      case SemanticClass::Floor: floor += n; break;
      case SemanticClass::Window: window += n; break;
      case SemanticClass::Void: break;
      default: other += n; break;
    }
  }
  const std::size_t visible = wall + ceiling + floor + window + other;
  if (visible == 0) throw DomainError("interior mask has no visible (non-void) pixels");

  const auto d = static_cast<double>(visible);
  ElementRatios r;
  r.wall = static_cast<double>(wall) / d;
  r.ceiling = static_cast<double>(ceiling) / d;
  r.floor = static_cast<double>(floor) / d;
  r.window = static_cast<double>(window) / d;
  r.other = static_cast<double>(other) / d;
  r.denominator = visible;
  return r;
}

ElementRatios aggregate_property_ratios(std::span<const ElementRatios> ratios) {
  if (ratios.empty()) throw DomainError("cannot aggregate an empty list of element ratios");
  if (ratios.size() == 1) return ratios.front();

  ElementRatios mean;
  for (const auto& r : ratios) {
    mean.wall += r.wall;
    mean.ceiling += r.ceiling;
    mean.floor += r.floor;
    mean.window += r.window;
    mean.other += r.other;
    mean.denominator += r.denominator;
  }
  const double total = mean.sum();
  if (!(total > 0.0)) throw DomainError("aggregated element ratios sum to zero");
  mean.wall /= total;
  mean.ceiling /= total;
  mean.floor /= total;
  mean.window /= total;
  mean.other /= total;
  return mean;
}

}  // namespace openness
