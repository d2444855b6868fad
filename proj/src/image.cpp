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
#include "visiontest/image.hpp"

#include <string>
#include <utility>

#include "visiontest/error.hpp"

namespace vt {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive, got " +
                                                std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Image Image::from_rgb(int width, int height, std::vector<std::uint8_t> rgb) {
  Image img(width, height);
  if (rgb.size() != img.data_.size()) {
    throw Error(ErrorKind::InvalidArgument, "pixel buffer holds " + std::to_string(rgb.size()) +
                                                " bytes, expected " + std::to_string(img.data_.size()));
  }
  img.data_ = std::move(rgb);
  return img;
}

double mean_luminance(const Image& img) {
  return luminance<double>(img).mean();
}

}  // namespace vt
