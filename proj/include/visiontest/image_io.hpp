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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "visiontest/image.hpp"

namespace vt {

/// Decodes a PNG (gray/RGB/palette, with or without alpha, 1-16 bit) or a
/// binary PPM (P6). 16-bit samples are reduced by integer division by 257 and
/// alpha is composited over black.
///
/// Throws Error with FileNotFound, UnsupportedFormat or CorruptImage.
Image load_image(const std::filesystem::path& path);

/// Same as load_image, for an in-memory encoded file.
Image decode_image(std::span<const std::uint8_t> encoded);

/// Writes an 8-bit RGB PNG without alpha, creating parent directories.
/// Throws Error(IoError) on failure.
void save_image(const Image& img, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& img);

}  // namespace vt
