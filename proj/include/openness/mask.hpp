#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace openness {

struct GrayImage;

enum class MaskFlavor { FloorPlan, Interior };

/// Semantic classes across both mask flavors. Floor plans use
/// {Wall, Room, Window, Door, Outside}; interiors use
/// {Wall, Ceiling, Floor, Window, Other, Void}.
enum class SemanticClass : std::uint8_t { Outside, Wall, Room, Window, Door, Void, Ceiling, Floor, Other };

std::string_view to_string(SemanticClass cls);
std::string_view to_string(MaskFlavor flavor);
std::optional<SemanticClass> semantic_class_from_string(std::string_view name);

/// True when `cls` belongs to the class set of `flavor`.
bool flavor_allows(MaskFlavor flavor, SemanticClass cls);

/// Maps raw label ids to semantic classes. Several ids may collapse onto the
/// same class (e.g. an ADE20K label space collapsed onto five buckets).
using Vocabulary = std::map<std::uint8_t, SemanticClass>;

/// The canonical sidecar vocabulary: floor plans 0..4 = outside, wall, room,
/// window, door; interiors 0..5 = void, wall, ceiling, floor, window, other.
Vocabulary default_vocabulary(MaskFlavor flavor);

/// Parses a class-map document of the form {"0":"outside","1":"wall",...}.
Vocabulary parse_vocabulary(std::string_view text);
Vocabulary load_vocabulary(const std::filesystem::path& path);
std::string serialize_vocabulary(const Vocabulary& vocabulary);

/// Throws FormatError unless every entry maps into the class set of `flavor`.
void validate_vocabulary(const Vocabulary& vocabulary, MaskFlavor flavor);

/// Per-pixel semantic label raster. Immutable after construction; the
/// constructor enforces labels.size() == width*height and that every label
/// is a vocabulary key valid for the flavor.
class ClassMask {
 public:
  ClassMask(int width, int height, std::vector<std::uint8_t> labels, Vocabulary vocabulary, MaskFlavor flavor);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return labels_.size(); }
  MaskFlavor flavor() const { return flavor_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::span<const std::uint8_t> labels() const { return labels_; }

  std::uint8_t label(int x, int y) const { return labels_[index(x, y)]; }
  SemanticClass semantic(int x, int y) const { return vocabulary_.at(label(x, y)); }
  SemanticClass semantic_at(std::size_t i) const { return vocabulary_.at(labels_[i]); }

  friend bool operator==(const ClassMask&, const ClassMask&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  std::vector<std::uint8_t> labels_;
  Vocabulary vocabulary_;
  MaskFlavor flavor_;
};

/// Builds a mask from a decoded raster; unknown ids raise FormatError naming
/// the id and the first pixel coordinate carrying it.
ClassMask mask_from_raster(const GrayImage& raster, const Vocabulary& vocabulary, MaskFlavor flavor);

/// Decodes a mask file. `.txt` files use the ASCII fixture grammar (and the
/// default vocabulary of the flavor); anything else is decoded as an indexed
/// raster and interpreted with `vocabulary`.
ClassMask parse_class_mask(const std::filesystem::path& path, const Vocabulary& vocabulary, MaskFlavor flavor);

/// ASCII fixture grammar, one line per pixel row, all lines equal length.
///   floor plan: '#' wall, '.' room, 'W' window, 'D' door, ' ' outside
///   interior:   'w' wall, 'c' ceiling, 'f' floor, 'n' window, 'o' other, ' ' void
/// The result uses default_vocabulary(flavor).
ClassMask parse_ascii_mask(std::string_view text, MaskFlavor flavor);

/// Inverse of parse_ascii_mask; one '\n'-terminated line per row.
std::string to_ascii(const ClassMask& mask);

enum class PixelState : std::uint8_t { Blocked, Open, Outside };

/// Pixel-level occupancy of a floor plan.
struct PixelOccupancy {
  int width = 0;
  int height = 0;
  std::vector<PixelState> state;
  std::size_t interior_pixel_count = 0;  ///< number of Open entries

  PixelState at(int x, int y) const { return state[static_cast<std::size_t>(y) * width + x]; }
  friend bool operator==(const PixelOccupancy&, const PixelOccupancy&) = default;
};

/// Wall and window -> Blocked, room and door -> Open, outside -> Outside.
/// Throws DomainError("no interior") when no pixel is open.
PixelOccupancy binarize_floorplan(const ClassMask& mask);

}  // namespace openness
