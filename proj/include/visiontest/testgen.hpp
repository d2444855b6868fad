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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "visiontest/box.hpp"
#include "visiontest/modifiers.hpp"

namespace vt {

enum class Task { Classification, Detection };
enum class SuiteKind { Initial, Similar, Severe };

std::string_view task_name(Task task);
std::string_view suite_kind_name(SuiteKind kind);

struct ExpectedBox {
  std::string label;
  Box bbox;
  friend bool operator==(const ExpectedBox&, const ExpectedBox&) = default;
};

struct ExpectClassification {
  std::string label;
  friend bool operator==(const ExpectClassification&, const ExpectClassification&) = default;
};

struct ExpectDetections {
  std::vector<ExpectedBox> boxes;
  friend bool operator==(const ExpectDetections&, const ExpectDetections&) = default;
};

/// The distinguished expectation that the system reports a problem.
struct ExpectErr {
  friend bool operator==(const ExpectErr&, const ExpectErr&) = default;
};

using ExpectedOutput = std::variant<ExpectClassification, ExpectDetections, ExpectErr>;

inline bool is_err(const ExpectedOutput& e) { return std::holds_alternative<ExpectErr>(e); }

struct Provenance {
  std::string source_id;
  std::filesystem::path source_image;
  Modification modification;  // sim is always resolved here
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TestCase {
  std::string id;
  std::filesystem::path image;
  ExpectedOutput expected;
  std::optional<Provenance> provenance;
  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct TestSuite {
  SuiteKind kind = SuiteKind::Initial;
  Task task = Task::Classification;
  std::vector<TestCase> cases;
  friend bool operator==(const TestSuite&, const TestSuite&) = default;
};

inline constexpr int kManifestSchemaVersion = 1;

struct GeneratedSuites {
  TestSuite similar;
  TestSuite severe;
};

/// Applies every modification to every initial case. Similar modifications
/// keep the source expectation, all others expect Err. Images are written to
/// `out_dir` as {source_id}__{op}__{seed}.png (a numeric suffix disambiguates
/// repeats). Case order is initial order x modification order.
///
/// Either side may come back empty; callers decide how to report that.
GeneratedSuites generate_suites(const TestSuite& initial, std::span<const Modification> mods,
                                const std::filesystem::path& out_dir);

/// Throws Error(SchemaViolation) with a JSON pointer if the suite breaks an invariant.
void validate_suite(const TestSuite& suite);

// Manifests. Relative image paths are resolved against `base_dir` when
// loading; paths under `base_dir` are written relative to it when saving.
TestSuite suite_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::ordered_json suite_to_json(const TestSuite& suite, const std::filesystem::path& base_dir);
TestSuite load_suite(const std::filesystem::path& path);
void save_suite(const TestSuite& suite, const std::filesystem::path& path);

nlohmann::ordered_json expected_to_json(const ExpectedOutput& expected);

/// Integral coordinates are written as JSON integers, others as reals.
nlohmann::ordered_json number_to_json(double v);
nlohmann::ordered_json box_to_json(const Box& box);

/// A modification list is a JSON array of modification objects.
std::vector<Modification> modifications_from_json(const nlohmann::json& j);
std::vector<Modification> load_modifications(const std::filesystem::path& path);

/// Parses a file as JSON, mapping I/O and syntax failures to IoError/SchemaViolation.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace vt
