#include "openness/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "openness/error.hpp"

namespace openness {
namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open raster '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read raster '" + path.string() + "'");
  return bytes;
}

struct MemoryReader {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->offset + length > reader->data.size()) png_error(png, "truncated PNG stream");
  std::copy_n(reader->data.begin() + static_cast<std::ptrdiff_t>(reader->offset), length, out);
  reader->offset += length;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

[[noreturn]] void png_fail(png_structp png, png_const_charp message) {
  auto* msg = static_cast<std::string*>(png_get_error_ptr(png));
  if (msg != nullptr) *msg = message;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

GrayImage decode_png(std::span<const std::uint8_t> bytes, const std::string& name) {
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (png == nullptr) throw FormatError("cannot allocate PNG reader");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError("cannot allocate PNG info");
  }

  GrayImage image;
  std::vector<png_bytep> rows;
  MemoryReader reader{bytes, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("'" + name + "': " + error);
  }
  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);

  const auto color_type = png_get_color_type(png, info);
  const auto bit_depth = png_get_bit_depth(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_PALETTE) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("'" + name + "': class masks must be single-channel grayscale or indexed PNG");
  }
  if (bit_depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("'" + name + "': 16-bit class masks are not supported");
  }
  if (bit_depth < 8) png_set_packing(png);
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);

  image.width = static_cast<int>(png_get_image_width(png, info));
  image.height = static_cast<int>(png_get_image_height(png, info));
  image.pixels.resize(static_cast<std::size_t>(image.width) * image.height);
  rows.resize(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) rows[y] = image.pixels.data() + static_cast<std::size_t>(y) * image.width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

// Binary PGM: "P5" <ws> width <ws> height <ws> maxval <single ws> raster. Comments start with '#'.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    bool any = false;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000) throw FormatError("'" + name + "': PGM header value out of range");
      ++pos;
      any = true;
    }
    if (!any) throw FormatError("'" + name + "': malformed PGM header");
    return value;
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (maxval <= 0 || maxval > 255) throw FormatError("'" + name + "': only 8-bit PGM is supported");
  ++pos;  // single whitespace before the raster
  GrayImage image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + count) throw FormatError("'" + name + "': truncated PGM raster");
  image.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return image;
}

std::vector<std::uint8_t> encode_png(const GrayImage& image, bool indexed) {
  std::vector<std::uint8_t> out;
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (png == nullptr) throw IoError("cannot allocate PNG writer");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("cannot allocate PNG info");
  }
  std::vector<png_const_bytep> rows(static_cast<std::size_t>(image.height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + error);
  }
  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               indexed ? PNG_COLOR_TYPE_PALETTE : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::array<png_color, 256> palette{};
  if (indexed) {
    for (int i = 0; i < 256; ++i) {
      const auto v = static_cast<png_byte>(i);
      palette[i] = png_color{v, v, v};
    }
    png_set_PLTE(png, info, palette.data(), 256);
  }
  png_set_compression_level(png, 9);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) rows[y] = image.pixels.data() + static_cast<std::size_t>(y) * image.width;
  png_write_rows(png, const_cast<png_bytepp>(rows.data()), static_cast<png_uint_32>(rows.size()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

GrayImage read_indexed_image(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string name = path.string();
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes, name);
  throw FormatError("'" + name + "': unrecognized raster format (expected PNG or binary PGM)");
}

std::vector<std::uint8_t> encode_png_gray(const GrayImage& image) { return encode_png(image, false); }

std::vector<std::uint8_t> encode_png_indexed(const GrayImage& image) { return encode_png(image, true); }

void write_png_gray(const std::filesystem::path& path, const GrayImage& image) {
  write_bytes(path, encode_png_gray(image));
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace openness
