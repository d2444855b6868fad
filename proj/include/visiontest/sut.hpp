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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "visiontest/box.hpp"
#include "visiontest/image.hpp"
#include "visiontest/testgen.hpp"

namespace vt {

struct Detection {
  std::string label;
  double score = 1.0;
  Box bbox;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct SutClassification {
  std::string label;
  friend bool operator==(const SutClassification&, const SutClassification&) = default;
};

struct SutDetections {
  std::vector<Detection> items;
  friend bool operator==(const SutDetections&, const SutDetections&) = default;
};

/// Any non-result outcome: an error reported by the system, or a crash,
/// timeout or protocol violation observed by the adapter ("crash: ...",
/// "timeout: ...", "protocol: ...").
struct SutError {
  std::string message;
  friend bool operator==(const SutError&, const SutError&) = default;
};

using SutOutput = std::variant<SutClassification, SutDetections, SutError>;

enum class Verdict { Pass, Fail };
std::string_view verdict_name(Verdict v);

inline constexpr double kDefaultIouThreshold = 0.5;

/// Passing iff the actual output equals the expectation:
///  - classification: identical label;
///  - detections: greedy highest-IoU matching pairs every expected box with a
///    distinct actual box of the same label at IoU >= threshold, and no
///    actual box is left over;
///  - err: the actual output is an error of any kind.
/// Throws Error(TaskMismatch) if the expectation does not belong to `task`.
Verdict compare_outputs(const ExpectedOutput& expected, const SutOutput& actual, Task task,
                        double iou_threshold = kDefaultIouThreshold);

std::string summarize(const ExpectedOutput& expected);
std::string summarize(const SutOutput& actual);

// ---------------------------------------------------------------------------
// Mock detector

namespace mock {
inline constexpr double kDarkFrameLuma = 10.0;
inline constexpr int kDominantMin = 200;
inline constexpr int kOtherMax = 80;
inline constexpr int kMinArea = 25;
inline constexpr std::string_view kDarkFrameMessage = "dark_frame";
}  // namespace mock

/// Deterministic color-blob detector: Error{"dark_frame"} when mean luma < 10,
/// otherwise one detection per 4-connected pure red/green/blue component of
/// at least 25 pixels, ordered by (label, y, x).
SutOutput mock_detect(const Image& img);

/// Classification view of mock_detect: the label of the largest component,
/// "none" when there is no component, errors passed through.
SutOutput mock_classify(const Image& img);

// ---------------------------------------------------------------------------
// Wire protocol: one compact JSON object per line.

std::string encode_request(std::uint64_t id, const std::filesystem::path& image, Task task);
std::string encode_response(std::uint64_t id, const SutOutput& output);

/// Maps a response line to a SutOutput. Violations (bad JSON, id mismatch,
/// missing or ill-typed fields) yield SutError with a "protocol: " prefix.
SutOutput decode_response(std::string_view line, std::uint64_t expected_id, Task task);

struct Request {
  std::uint64_t id = 0;
  std::filesystem::path image_path;
  Task task = Task::Detection;
};

/// Parses a request line; throws Error(SchemaViolation) on malformed input.
Request decode_request(std::string_view line);

/// Serves the protocol on a pair of streams with the mock detector until the
/// input closes. Malformed requests are answered with id 0 and a
/// "protocol: " message.
void serve_mock(std::istream& in, std::ostream& out);

// ---------------------------------------------------------------------------
// Adapters

/// theta_S: total function from an image file to a SutOutput. An adapter
/// handles one request at a time and is never shared between threads.
class SutAdapter {
 public:
  virtual ~SutAdapter() = default;
  virtual SutOutput query(const std::filesystem::path& image, Task task) = 0;
};

class MockAdapter final : public SutAdapter {
 public:
  SutOutput query(const std::filesystem::path& image, Task task) override;
};

struct SubprocessConfig {
  std::vector<std::string> command;  // executable followed by arguments
  std::chrono::milliseconds timeout{30000};
  std::filesystem::path working_dir;  // empty: inherit
};

/// Drives an external executable over its stdin/stdout. The child is started
/// on the first query and restarted after a crash, timeout or protocol error.
class SubprocessAdapter final : public SutAdapter {
 public:
  explicit SubprocessAdapter(SubprocessConfig config);
  ~SubprocessAdapter() override;
  SubprocessAdapter(const SubprocessAdapter&) = delete;
  SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

  SutOutput query(const std::filesystem::path& image, Task task) override;

 private:
  class Process;
  SubprocessConfig config_;
  std::unique_ptr<Process> process_;
  std::uint64_t next_id_ = 1;
};

/// Splits a command string on whitespace, honoring single and double quotes.
std::vector<std::string> split_command(std::string_view command);

/// "mock" selects the in-process MockAdapter; anything else is a command line.
std::unique_ptr<SutAdapter> make_adapter(std::string_view spec,
                                         std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

}  // namespace vt
