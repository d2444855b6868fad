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
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vt {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Owned 8-bit RGB raster, row-major, channels interleaved.
///
/// Channel range is enforced by the storage type. Dimensions are fixed at
/// construction and both must be positive.
class Image {
 public:
  Image(int width, int height, Rgb fill = {});
  /// Takes ownership of `rgb`, which must hold exactly width*height*3 bytes.
  static Image from_rgb(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = offset(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    const std::size_t i = offset(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }
  std::uint8_t channel(int x, int y, int c) const noexcept { return data_[offset(x, y) + c]; }
  std::uint8_t& channel(int x, int y, int c) noexcept { return data_[offset(x, y) + c]; }

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }
  std::span<std::uint8_t> bytes() noexcept { return data_; }

  bool same_size(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// Single-channel real plane indexed (row, col) = (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using LumaPlane = Plane<double>;

/// BT.601 luma 0.299 R + 0.587 G + 0.114 B, unrounded.
///
/// The weighted sum is formed exactly in integers (per-mille weights) and
/// divided once, so gray pixels map to their exact value and every result
/// lies within [min channel, max channel] of its pixel.
template <typename Scalar = double>
Plane<Scalar> luminance(const Image& img) {
  Plane<Scalar> out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      const int weighted = 299 * p.r + 587 * p.g + 114 * p.b;
      out(y, x) = static_cast<Scalar>(static_cast<double>(weighted) / 1000.0);
    }
  }
  return out;
}

template <typename Scalar = double>
Plane<Scalar> channel_plane(const Image& img, int channel) {
  Plane<Scalar> out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out(y, x) = static_cast<Scalar>(img.channel(x, y, channel));
    }
  }
  return out;
}

/// Writes a real plane back into one channel, rounding half up and clamping to [0,255].
template <typename Derived>
void store_channel(const Eigen::DenseBase<Derived>& plane, int channel, Image& img) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double v = static_cast<double>(plane(y, x));
      const double r = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
      img.channel(x, y, channel) = static_cast<std::uint8_t>(r + 0.5);
    }
  }
}

double mean_luminance(const Image& img);

}  // namespace vt
