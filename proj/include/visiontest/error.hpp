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

#include <stdexcept>
#include <string>
#include <string_view>

namespace vt {

enum class ErrorKind {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  IoError,
  InvalidParams,
  DegenerateTransform,
  DimensionMismatch,
  ImageTooSmall,
  SchemaViolation,
  EmptyModificationList,
  TaskMismatch,
  MissingImage,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported as an Error.
/// `pointer()` carries a JSON pointer (e.g. "/cases/3/id" or "/params/strength")
/// for schema and parameter errors; it is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string pointer = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& pointer() const noexcept { return pointer_; }
  /// Message without the kind and pointer prefixes.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::string pointer_;
};

}  // namespace vt
