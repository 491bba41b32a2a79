#include "openness/mask.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "openness/error.hpp"
#include "openness/image_io.hpp"

namespace openness {
namespace {

constexpr std::array kClassNames{
    std::pair{SemanticClass::Outside, std::string_view{"outside"}},
    std::pair{SemanticClass::Wall, std::string_view{"wall"}},
    std::pair{SemanticClass::Room, std::string_view{"room"}},
    std::pair{SemanticClass::Window, std::string_view{"window"}},
    std::pair{SemanticClass::Door, std::string_view{"door"}},
    std::pair{SemanticClass::Void, std::string_view{"void"}},
    std::pair{SemanticClass::Ceiling, std::string_view{"ceiling"}},
    std::pair{SemanticClass::Floor, std::string_view{"floor"}},
    std::pair{SemanticClass::Other, std::string_view{"other"}},
};

struct Glyph {
  char symbol;
  SemanticClass cls;
};

constexpr std::array kFloorPlanGlyphs{
    Glyph{'#', SemanticClass::Wall},   Glyph{'.', SemanticClass::Room},    Glyph{'W', SemanticClass::Window},
    Glyph{'D', SemanticClass::Door},   Glyph{' ', SemanticClass::Outside},
};

constexpr std::array kInteriorGlyphs{
    Glyph{'w', SemanticClass::Wall},  Glyph{'c', SemanticClass::Ceiling}, Glyph{'f', SemanticClass::Floor},
    Glyph{'n', SemanticClass::Window}, Glyph{'o', SemanticClass::Other},  Glyph{' ', SemanticClass::Void},
};

std::span<const Glyph> glyphs_for(MaskFlavor flavor) {
  if (flavor == MaskFlavor::FloorPlan) return kFloorPlanGlyphs;
  return kInteriorGlyphs;
}

std::uint8_t canonical_id(MaskFlavor flavor, SemanticClass cls) {
  for (const auto& [id, c] : default_vocabulary(flavor)) {
    if (c == cls) return id;
  }
  throw FormatError(fmt::format("class '{}' is not part of the {} vocabulary", to_string(cls), to_string(flavor)));
}

}  // namespace

std::string_view to_string(SemanticClass cls) {
  for (const auto& [c, name] : kClassNames) {
    if (c == cls) return name;
  }
  return "unknown";
}

std::string_view to_string(MaskFlavor flavor) { return flavor == MaskFlavor::FloorPlan ? "floor-plan" : "interior"; }

std::optional<SemanticClass> semantic_class_from_string(std::string_view name) {
  for (const auto& [c, n] : kClassNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

bool flavor_allows(MaskFlavor flavor, SemanticClass cls) {
  const auto glyphs = glyphs_for(flavor);
  return std::any_of(glyphs.begin(), glyphs.end(), [cls](const Glyph& g) { return g.cls == cls; });
}

Vocabulary default_vocabulary(MaskFlavor flavor) {
  if (flavor == MaskFlavor::FloorPlan) {
    return {{0, SemanticClass::Outside},
            {1, SemanticClass::Wall},
            {2, SemanticClass::Room},
            {3, SemanticClass::Window},
            {4, SemanticClass::Door}};
  }
  return {{0, SemanticClass::Void},    {1, SemanticClass::Wall},   {2, SemanticClass::Ceiling},
          {3, SemanticClass::Floor},   {4, SemanticClass::Window}, {5, SemanticClass::Other}};
}

Vocabulary parse_vocabulary(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("class map is not a valid key/value document: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("class map must be an object of id -> class name");
  Vocabulary vocabulary;
  for (const auto& [key, value] : doc.items()) {
    unsigned id = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc{} || ptr != key.data() + key.size() || id > 255) {
      throw FormatError(fmt::format("class map key '{}' is not an 8-bit class id", key));
    }
    if (!value.is_string()) throw FormatError(fmt::format("class map entry '{}' must be a class name", key));
    const auto cls = semantic_class_from_string(value.get<std::string>());
    if (!cls) throw FormatError(fmt::format("class map entry '{}' names unknown class '{}'", key, value.get<std::string>()));
    vocabulary.emplace(static_cast<std::uint8_t>(id), *cls);
  }
  if (vocabulary.empty()) throw FormatError("class map is empty");
  return vocabulary;
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open class map '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_vocabulary(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string serialize_vocabulary(const Vocabulary& vocabulary) {
  // Insertion order by numeric id, not lexicographic key order.
  std::string out = "{";
  bool first = true;
  for (const auto& [id, cls] : vocabulary) {
    out += fmt::format("{}\"{}\":\"{}\"", first ? "" : ",", id, to_string(cls));
    first = false;
  }
  return out + "}";
}

void validate_vocabulary(const Vocabulary& vocabulary, MaskFlavor flavor) {
  if (vocabulary.empty()) throw FormatError("empty vocabulary");
  for (const auto& [id, cls] : vocabulary) {
    if (!flavor_allows(flavor, cls)) {
      throw FormatError(fmt::format("class id {} maps to '{}', which is not a {} class", id, to_string(cls),
                                    to_string(flavor)));
    }
  }
}

ClassMask::ClassMask(int width, int height, std::vector<std::uint8_t> labels, Vocabulary vocabulary,
                     MaskFlavor flavor)
    : width_(width), height_(height), labels_(std::move(labels)), vocabulary_(std::move(vocabulary)), flavor_(flavor) {
  if (width_ <= 0 || height_ <= 0) throw FormatError("zero-area mask");
  if (labels_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw FormatError(fmt::format("mask has {} labels, expected {}x{}", labels_.size(), width_, height_));
  }
  validate_vocabulary(vocabulary_, flavor_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!vocabulary_.contains(labels_[i])) {
      throw FormatError(fmt::format("unknown class id {} at pixel (x={}, y={})", labels_[i],
                                    i % static_cast<std::size_t>(width_), i / static_cast<std::size_t>(width_)));
    }
  }
}

ClassMask mask_from_raster(const GrayImage& raster, const Vocabulary& vocabulary, MaskFlavor flavor) {
  return ClassMask(raster.width, raster.height, raster.pixels, vocabulary, flavor);
}

ClassMask parse_class_mask(const std::filesystem::path& path, const Vocabulary& vocabulary, MaskFlavor flavor) {
  try {
    if (path.extension() == ".txt") {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot open mask '" + path.string() + "'");
      std::ostringstream buffer;
      buffer << in.rdbuf();
      return parse_ascii_mask(buffer.str(), flavor);
    }
    return mask_from_raster(read_indexed_image(path), vocabulary, flavor);
  } catch (const FormatError& e) {
    const std::string what = e.what();
    if (what.find(path.string()) != std::string::npos) throw;
    throw FormatError(path.string() + ": " + what);
  }
}

ClassMask parse_ascii_mask(std::string_view text, MaskFlavor flavor) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines.front().empty()) throw FormatError("zero-area ASCII mask");

  const auto width = lines.front().size();
  const auto glyphs = glyphs_for(flavor);
  std::vector<std::uint8_t> labels;
  labels.reserve(width * lines.size());
  for (std::size_t y = 0; y < lines.size(); ++y) {
    if (lines[y].size() != width) {
      throw FormatError(fmt::format("ASCII mask line {} has length {}, expected {}", y, lines[y].size(), width));
    }
    for (std::size_t x = 0; x < width; ++x) {
      const char ch = lines[y][x];
      const auto it = std::find_if(glyphs.begin(), glyphs.end(), [ch](const Glyph& g) { return g.symbol == ch; });
      if (it == glyphs.end()) {
        throw FormatError(fmt::format("unknown {} symbol '{}' at pixel (x={}, y={})", to_string(flavor), ch, x, y));
      }
      labels.push_back(canonical_id(flavor, it->cls));
    }
  }
  return ClassMask(static_cast<int>(width), static_cast<int>(lines.size()), std::move(labels),
                   default_vocabulary(flavor), flavor);
}

std::string to_ascii(const ClassMask& mask) {
  const auto glyphs = glyphs_for(mask.flavor());
  std::string out;
  out.reserve((static_cast<std::size_t>(mask.width()) + 1) * mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const auto cls = mask.semantic(x, y);
      const auto it = std::find_if(glyphs.begin(), glyphs.end(), [cls](const Glyph& g) { return g.cls == cls; });
      out.push_back(it->symbol);
    }
    out.push_back('\n');
  }
  return out;
}

PixelOccupancy binarize_floorplan(const ClassMask& mask) {
  if (mask.flavor() != MaskFlavor::FloorPlan) throw DomainError("binarize_floorplan requires a floor-plan mask");

  // Resolve each vocabulary id once instead of per pixel.
  std::array<PixelState, 256> lut{};
  for (const auto& [id, cls] : mask.vocabulary()) {
    switch (cls) {
      case SemanticClass::Wall:
      case SemanticClass::Window:
        lut[id] = PixelState::Blocked;
        break;
      case SemanticClass::Room:
      case SemanticClass::Door:
        lut[id] = PixelState::Open;
        break;
      default:
        lut[id] = PixelState::Outside;
        break;
    }
  }

  PixelOccupancy occ;
  occ.width = mask.width();
  occ.height = mask.height();
  occ.state.reserve(mask.size());
  for (const auto label : mask.labels()) {
    const auto s = lut[label];
    occ.state.push_back(s);
    if (s == PixelState::Open) ++occ.interior_pixel_count;
  }
  if (occ.interior_pixel_count == 0) throw DomainError("no interior: floor plan has zero open pixels");
  return occ;
}

}  // namespace openness
