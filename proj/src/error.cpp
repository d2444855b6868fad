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
#include "visiontest/error.hpp"

#include <utility>

namespace vt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::CorruptImage: return "CorruptImage";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateTransform: return "DegenerateTransform";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ImageTooSmall: return "ImageTooSmall";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::EmptyModificationList: return "EmptyModificationList";
    case ErrorKind::TaskMismatch: return "TaskMismatch";
    case ErrorKind::MissingImage: return "MissingImage";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, const std::string& pointer) {
  std::string out(to_string(kind));
  out += ": ";
  if (!pointer.empty()) {
    out += pointer;
    out += ": ";
  }
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::string pointer)
    : std::runtime_error(format_message(kind, message, pointer)),
      kind_(kind),
      message_(message),
      pointer_(std::move(pointer)) {}

}  // namespace vt
