/**
 * Copyright 2026 The visiontest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "visiontest/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <new>
#include <string>
#include <system_error>

#include "visiontest/error.hpp"

namespace vt {

namespace fs = std::filesystem;

namespace {

// Larger headers are treated as corrupt rather than allocated.
constexpr std::uint32_t kMaxDimension = 1u << 15;
constexpr std::uint64_t kMaxPixels = 1ull << 25;

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool has_png_signature(std::span<const std::uint8_t> in) {
  return in.size() >= 8 && std::memcmp(in.data(), kPngSignature, 8) == 0;
}

bool has_ppm_signature(std::span<const std::uint8_t> in) {
  return in.size() >= 2 && in[0] == 'P' && in[1] == '6';
}

// libpng reports errors through callbacks that must not return. The message is
// copied into a plain buffer before longjmp-ing back to the decode/encode frame.
struct PngErrorSink {
  char message[256] = "unknown libpng error";
};

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) {
    std::strncpy(sink->message, msg, sizeof(sink->message) - 1);
    sink->message[sizeof(sink->message) - 1] = '\0';
  }
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (count > reader->size - reader->pos) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, reader->data + reader->pos, count);
  reader->pos += count;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  try {
    out->insert(out->end(), data, data + count);
  } catch (const std::bad_alloc&) {
    png_error(png, "out of memory");
  }
}

void flush_noop(png_structp) {}

struct PngReadHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadHandle() {
    if (png != nullptr) png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr);
  }
};

struct PngWriteHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteHandle() {
    if (png != nullptr) png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
  }
};

Image decode_png(std::span<const std::uint8_t> in) {
  // Everything with a destructor lives above the setjmp so a longjmp from
  // libpng never skips one.
  PngReadHandle handle;
  PngErrorSink sink;
  MemoryReader reader{in.data(), in.size(), 0};
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;

  handle.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (handle.png == nullptr) throw Error(ErrorKind::CorruptImage, "cannot create PNG decoder");
  handle.info = png_create_info_struct(handle.png);
  if (handle.info == nullptr) throw Error(ErrorKind::CorruptImage, "cannot create PNG decoder");

  if (setjmp(png_jmpbuf(handle.png))) {
    throw Error(ErrorKind::CorruptImage, sink.message);
  }

  png_set_read_fn(handle.png, &reader, read_from_memory);
  png_set_user_limits(handle.png, kMaxDimension, kMaxDimension);
  png_read_info(handle.png, handle.info);

  width = png_get_image_width(handle.png, handle.info);
  height = png_get_image_height(handle.png, handle.info);
  if (static_cast<std::uint64_t>(width) * height > kMaxPixels) {
    png_error(handle.png, "image too large");
  }

  const int color_type = png_get_color_type(handle.png, handle.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(handle.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(handle.png, handle.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(handle.png);
  }
  if (png_get_valid(handle.png, handle.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(handle.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(handle.png);
  }
  png_set_interlace_handling(handle.png);
  png_read_update_info(handle.png, handle.info);

  channels = png_get_channels(handle.png, handle.info);
  bit_depth = png_get_bit_depth(handle.png, handle.info);
  if ((channels != 3 && channels != 4) || (bit_depth != 8 && bit_depth != 16)) {
    png_error(handle.png, "unexpected sample layout after expansion");
  }

  const std::size_t row_bytes = png_get_rowbytes(handle.png, handle.info);
  raw.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raw.data() + y * row_bytes;
  png_read_image(handle.png, rows.data());
  png_read_end(handle.png, nullptr);

  const bool wide = bit_depth == 16;
  const std::uint32_t max_value = wide ? 65535u : 255u;
  const std::size_t sample_bytes = wide ? 2 : 1;
  auto sample = [&](std::size_t index) -> std::uint32_t {
    const std::uint8_t* p = raw.data() + index * sample_bytes;
    return wide ? (static_cast<std::uint32_t>(p[0]) << 8) | p[1] : p[0];
  };

  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t row_start = y * (row_bytes / sample_bytes);
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t base = row_start + x * channels;
      const std::uint32_t alpha = channels == 4 ? sample(base + 3) : max_value;
      for (int c = 0; c < 3; ++c) {
        std::uint32_t v = sample(base + c);
        if (alpha != max_value) v = (v * alpha + max_value / 2) / max_value;
        if (wide) v /= 257;
        rgb[(y * width + x) * 3 + c] = static_cast<std::uint8_t>(v);
      }
    }
  }
  return Image::from_rgb(static_cast<int>(width), static_cast<int>(height), std::move(rgb));
}

class PpmParser {
 public:
  explicit PpmParser(std::span<const std::uint8_t> in) : in_(in) {}

  Image parse() {
    pos_ = 2;  // magic already checked
    const std::uint64_t width = next_number("width");
    const std::uint64_t height = next_number("height");
    const std::uint64_t max_value = next_number("maxval");
    if (width == 0 || height == 0) corrupt("zero dimension");
    if (width > kMaxDimension || height > kMaxDimension || width * height > kMaxPixels) {
      corrupt("image too large");
    }
    if (max_value == 0 || max_value > 65535) corrupt("maxval out of range");
    if (pos_ >= in_.size() || !is_space(in_[pos_])) corrupt("missing separator before raster");
    ++pos_;

    const std::size_t sample_bytes = max_value > 255 ? 2 : 1;
    const std::size_t samples = static_cast<std::size_t>(width * height * 3);
    if (in_.size() - pos_ < samples * sample_bytes) corrupt("truncated raster");

    std::vector<std::uint8_t> rgb(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      std::uint32_t v = in_[pos_ + i * sample_bytes];
      if (sample_bytes == 2) v = (v << 8) | in_[pos_ + i * sample_bytes + 1];
      if (v > max_value) corrupt("sample exceeds maxval");
      if (max_value == 65535) {
        v /= 257;
      } else if (max_value != 255) {
        v = static_cast<std::uint32_t>((v * 255ull + max_value / 2) / max_value);
      }
      rgb[i] = static_cast<std::uint8_t>(v);
    }
    return Image::from_rgb(static_cast<int>(width), static_cast<int>(height), std::move(rgb));
  }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  [[noreturn]] static void corrupt(const std::string& what) {
    throw Error(ErrorKind::CorruptImage, "PPM: " + what);
  }

  void skip_space_and_comments() {
    while (pos_ < in_.size()) {
      if (is_space(in_[pos_])) {
        ++pos_;
      } else if (in_[pos_] == '#') {
        while (pos_ < in_.size() && in_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t next_number(const char* field) {
    skip_space_and_comments();
    std::uint64_t value = 0;
    std::size_t digits = 0;
    while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') {
      value = value * 10 + (in_[pos_] - '0');
      ++pos_;
      if (++digits > 9) corrupt(std::string(field) + " has too many digits");
    }
    if (digits == 0) corrupt(std::string("missing ") + field);
    return value;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

Image decode_image(std::span<const std::uint8_t> encoded) {
  if (has_png_signature(encoded)) return decode_png(encoded);
  if (has_ppm_signature(encoded)) return PpmParser(encoded).parse();
  throw Error(ErrorKind::UnsupportedFormat, "not a PNG or binary PPM (P6) file");
}

Image load_image(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorKind::FileNotFound, "no such image file: " + path.string());
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.message());
  }
}

namespace {

// Runs the libpng calls in a frame that owns no objects with destructors, so
// the longjmp out of on_png_error cannot skip any cleanup.
bool write_png(png_structp png, png_infop info, const Image& img, png_bytep* rows, std::vector<std::uint8_t>* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, out, write_to_vector, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  PngWriteHandle handle;
  PngErrorSink sink;
  handle.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (handle.png == nullptr) throw Error(ErrorKind::IoError, "cannot create PNG encoder");
  handle.info = png_create_info_struct(handle.png);
  if (handle.info == nullptr) throw Error(ErrorKind::IoError, "cannot create PNG encoder");

  // libpng takes non-const row pointers but does not write through them.
  auto* base = const_cast<std::uint8_t*>(img.bytes().data());
  const std::size_t stride = static_cast<std::size_t>(img.width()) * 3;
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = base + y * stride;

  std::vector<std::uint8_t> out;
  if (!write_png(handle.png, handle.info, img, rows.data(), &out)) throw Error(ErrorKind::IoError, sink.message);
  return out;
}

void save_image(const Image& img, const fs::path& path) {
  const std::vector<std::uint8_t> encoded = encode_png(img);
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::IoError,
                  "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(encoded.data()),
             static_cast<std::streamsize>(encoded.size()));
  file.close();
  if (!file) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace vt
