#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace openness {

/// Single-channel 8-bit raster, row-major, top-left origin.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Reads an indexed or grayscale raster without any palette expansion, so each
/// pixel value is the raw stored index. Accepts 8-bit (or packed sub-byte)
/// grayscale/palette PNG and binary PGM (P5, maxval <= 255).
GrayImage read_indexed_image(const std::filesystem::path& path);

/// Encodes as an 8-bit grayscale PNG. Output bytes depend only on the image.
std::vector<std::uint8_t> encode_png_gray(const GrayImage& image);

/// Encodes as an 8-bit indexed PNG with a gray palette; pixel values are
/// stored verbatim as palette indices.
std::vector<std::uint8_t> encode_png_indexed(const GrayImage& image);

void write_png_gray(const std::filesystem::path& path, const GrayImage& image);

/// Writes the raw bytes, throwing IoError on failure.
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace openness
