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
#include "visiontest/sut.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <tuple>

#include "visiontest/error.hpp"
#include "visiontest/image_io.hpp"

namespace vt {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view verdict_name(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

// ---------------------------------------------------------------------------
// Comparison

namespace {

bool detections_match(const std::vector<ExpectedBox>& expected, std::vector<Detection> actual,
                      double threshold) {
  if (expected.size() != actual.size()) return false;
  // Canonical order makes the greedy tie-break independent of how the
  // system happened to list its detections.
  std::sort(actual.begin(), actual.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.label, a.bbox, a.score) < std::tie(b.label, b.bbox, b.score);
  });

  struct Candidate {
    double overlap;
    std::size_t expected;
    std::size_t actual;
  };
  std::vector<Candidate> candidates;
  for (std::size_t e = 0; e < expected.size(); ++e) {
    for (std::size_t a = 0; a < actual.size(); ++a) {
      if (expected[e].label != actual[a].label) continue;
      const double overlap = iou(expected[e].bbox, actual[a].bbox);
      if (overlap >= threshold) candidates.push_back({overlap, e, a});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    if (l.overlap != r.overlap) return l.overlap > r.overlap;
    if (l.expected != r.expected) return l.expected < r.expected;
    return l.actual < r.actual;
  });

  std::vector<bool> expected_used(expected.size(), false);
  std::vector<bool> actual_used(actual.size(), false);
  std::size_t matched = 0;
  for (const Candidate& c : candidates) {
    if (expected_used[c.expected] || actual_used[c.actual]) continue;
    expected_used[c.expected] = true;
    actual_used[c.actual] = true;
    ++matched;
  }
  return matched == expected.size();
}

}  // namespace

Verdict compare_outputs(const ExpectedOutput& expected, const SutOutput& actual, Task task,
                        double iou_threshold) {
  if (is_err(expected)) {
    return std::holds_alternative<SutError>(actual) ? Verdict::Pass : Verdict::Fail;
  }
  if (const auto* want = std::get_if<ExpectClassification>(&expected)) {
    if (task != Task::Classification) {
      throw Error(ErrorKind::TaskMismatch, "classification expectation in a detection task");
    }
    const auto* got = std::get_if<SutClassification>(&actual);
    return got != nullptr && got->label == want->label ? Verdict::Pass : Verdict::Fail;
  }
  const auto& want = std::get<ExpectDetections>(expected);
  if (task != Task::Detection) {
    throw Error(ErrorKind::TaskMismatch, "detection expectation in a classification task");
  }
  const auto* got = std::get_if<SutDetections>(&actual);
  if (got == nullptr) return Verdict::Fail;
  return detections_match(want.boxes, got->items, iou_threshold) ? Verdict::Pass : Verdict::Fail;
}

namespace {

std::string box_text(const Box& b) { return box_to_json(b).dump(); }

}  // namespace

std::string summarize(const ExpectedOutput& expected) {
  if (const auto* c = std::get_if<ExpectClassification>(&expected)) return c->label;
  if (const auto* d = std::get_if<ExpectDetections>(&expected)) {
    if (d->boxes.empty()) return "no detections";
    std::string out;
    for (const auto& b : d->boxes) {
      if (!out.empty()) out += "; ";
      out += b.label + "@" + box_text(b.bbox);
    }
    return out;
  }
  return "err";
}

std::string summarize(const SutOutput& actual) {
  if (const auto* c = std::get_if<SutClassification>(&actual)) return c->label;
  if (const auto* d = std::get_if<SutDetections>(&actual)) {
    if (d->items.empty()) return "no detections";
    std::string out;
    for (const auto& item : d->items) {
      if (!out.empty()) out += "; ";
      out += item.label + "@" + box_text(item.bbox);
    }
    return out;
  }
  return "err(" + std::get<SutError>(actual).message + ")";
}

// ---------------------------------------------------------------------------
// Mock detector

namespace {

enum class Blob : std::uint8_t { None, Blue, Green, Red };

Blob classify_pixel(Rgb p) {
  auto dominant = [](int d, int o1, int o2) {
    return d >= mock::kDominantMin && o1 <= mock::kOtherMax && o2 <= mock::kOtherMax;
  };
  if (dominant(p.r, p.g, p.b)) return Blob::Red;
  if (dominant(p.g, p.r, p.b)) return Blob::Green;
  if (dominant(p.b, p.r, p.g)) return Blob::Blue;
  return Blob::None;
}

std::string_view blob_label(Blob b) {
  switch (b) {
    case Blob::Red: return "red";
    case Blob::Green: return "green";
    case Blob::Blue: return "blue";
    case Blob::None: break;
  }
  return "";
}

struct Component {
  std::string label;
  int area = 0;
  Box bbox;
};

std::vector<Component> find_components(const Image& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<Blob> kind(img.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) kind[static_cast<std::size_t>(y) * w + x] = classify_pixel(img.at(x, y));
  }
  std::vector<bool> seen(kind.size(), false);
  std::vector<Component> out;
  std::queue<std::size_t> frontier;
  for (std::size_t start = 0; start < kind.size(); ++start) {
    if (seen[start] || kind[start] == Blob::None) continue;
    const Blob blob = kind[start];
    int min_x = w, min_y = h, max_x = -1, max_y = -1, area = 0;
    seen[start] = true;
    frontier.push(start);
    while (!frontier.empty()) {
      const std::size_t i = frontier.front();
      frontier.pop();
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      ++area;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
      const std::pair<int, int> steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (auto [dx, dy] : steps) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (seen[j] || kind[j] != blob) continue;
        seen[j] = true;
        frontier.push(j);
      }
    }
    if (area < mock::kMinArea) continue;
    out.push_back({std::string(blob_label(blob)), area,
                   Box{double(min_x), double(min_y), double(max_x - min_x + 1), double(max_y - min_y + 1)}});
  }
  std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
    return std::tie(a.label, a.bbox.y, a.bbox.x, a.bbox.h, a.bbox.w) <
           std::tie(b.label, b.bbox.y, b.bbox.x, b.bbox.h, b.bbox.w);
  });
  return out;
}

}  // namespace

SutOutput mock_detect(const Image& img) {
  if (mean_luminance(img) < mock::kDarkFrameLuma) return SutError{std::string(mock::kDarkFrameMessage)};
  SutDetections det;
  for (auto& c : find_components(img)) det.items.push_back({std::move(c.label), 1.0, c.bbox});
  return det;
}

SutOutput mock_classify(const Image& img) {
  if (mean_luminance(img) < mock::kDarkFrameLuma) return SutError{std::string(mock::kDarkFrameMessage)};
  const auto components = find_components(img);
  if (components.empty()) return SutClassification{"none"};
  const auto largest = std::max_element(components.begin(), components.end(),
                                        [](const Component& a, const Component& b) { return a.area < b.area; });
  return SutClassification{largest->label};
}

SutOutput MockAdapter::query(const fs::path& image, Task task) {
  try {
    const Image img = load_image(image);
    return task == Task::Classification ? mock_classify(img) : mock_detect(img);
  } catch (const Error& e) {
    return SutError{"unreadable_image: " + e.message()};
  }
}

// ---------------------------------------------------------------------------
// Protocol

std::string encode_request(std::uint64_t id, const fs::path& image, Task task) {
  ordered_json j;
  j["id"] = id;
  j["image_path"] = fs::absolute(image).lexically_normal().string();
  j["task"] = task_name(task);
  return j.dump();
}

std::string encode_response(std::uint64_t id, const SutOutput& output) {
  ordered_json j;
  j["id"] = id;
  if (const auto* c = std::get_if<SutClassification>(&output)) {
    j["status"] = "ok";
    j["label"] = c->label;
  } else if (const auto* d = std::get_if<SutDetections>(&output)) {
    j["status"] = "ok";
    j["detections"] = ordered_json::array();
    for (const auto& item : d->items) {
      j["detections"].push_back(
          {{"label", item.label}, {"score", item.score}, {"bbox", box_to_json(item.bbox)}});
    }
  } else {
    j["status"] = "err";
    j["message"] = std::get<SutError>(output).message;
  }
  return j.dump();
}

namespace {

SutError protocol_error(const std::string& what) { return SutError{"protocol: " + what}; }

}  // namespace

SutOutput decode_response(std::string_view line, std::uint64_t expected_id, Task task) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    return protocol_error("response is not valid JSON");
  }
  if (!j.is_object()) return protocol_error("response is not a JSON object");
  const auto id = j.find("id");
  if (id == j.end() || !id->is_number_unsigned()) return protocol_error("response lacks an unsigned id");
  if (id->get<std::uint64_t>() != expected_id) {
    return protocol_error("response id " + std::to_string(id->get<std::uint64_t>()) +
                          " does not match request id " + std::to_string(expected_id));
  }
  const auto status = j.find("status");
  if (status == j.end() || !status->is_string()) return protocol_error("response lacks a status");

  if (*status == "err") {
    const auto message = j.find("message");
    if (message == j.end() || !message->is_string()) return protocol_error("err response lacks a message");
    return SutError{message->get<std::string>()};
  }
  if (*status != "ok") return protocol_error("unknown status \"" + status->get<std::string>() + "\"");

  if (task == Task::Classification) {
    const auto label = j.find("label");
    if (label == j.end() || !label->is_string()) return protocol_error("classification response lacks a label");
    return SutClassification{label->get<std::string>()};
  }
  const auto detections = j.find("detections");
  if (detections == j.end() || !detections->is_array()) {
    return protocol_error("detection response lacks a detections array");
  }
  SutDetections out;
  for (const auto& d : *detections) {
    if (!d.is_object()) return protocol_error("detection is not an object");
    const auto label = d.find("label");
    const auto score = d.find("score");
    const auto bbox = d.find("bbox");
    if (label == d.end() || !label->is_string()) return protocol_error("detection lacks a label");
    if (score == d.end() || !score->is_number()) return protocol_error("detection lacks a score");
    if (bbox == d.end() || !bbox->is_array() || bbox->size() != 4 ||
        !std::all_of(bbox->begin(), bbox->end(), [](const json& v) { return v.is_number(); })) {
      return protocol_error("detection bbox must be [x, y, w, h]");
    }
    Detection item{label->get<std::string>(), score->get<double>(),
                   Box{(*bbox)[0].get<double>(), (*bbox)[1].get<double>(), (*bbox)[2].get<double>(),
                       (*bbox)[3].get<double>()}};
    if (!(item.score >= 0.0 && item.score <= 1.0)) return protocol_error("detection score outside [0,1]");
    if (!(item.bbox.w > 0.0 && item.bbox.h > 0.0)) return protocol_error("detection bbox needs w,h > 0");
    out.items.push_back(std::move(item));
  }
  return out;
}

Request decode_request(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    throw Error(ErrorKind::SchemaViolation, "request is not valid JSON");
  }
  if (!j.is_object()) throw Error(ErrorKind::SchemaViolation, "request is not a JSON object");
  Request req;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_number_unsigned()) throw Error(ErrorKind::SchemaViolation, "id must be an unsigned integer", "/id");
  req.id = id->get<std::uint64_t>();
  const auto path = j.find("image_path");
  if (path == j.end() || !path->is_string()) {
    throw Error(ErrorKind::SchemaViolation, "missing image_path", "/image_path");
  }
  req.image_path = path->get<std::string>();
  const auto task = j.find("task");
  if (task == j.end() || !task->is_string() || (*task != "classification" && *task != "detection")) {
    throw Error(ErrorKind::SchemaViolation, "task must be \"classification\" or \"detection\"", "/task");
  }
  req.task = *task == "classification" ? Task::Classification : Task::Detection;
  return req;
}

void serve_mock(std::istream& in, std::ostream& out) {
  MockAdapter mock;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string reply;
    try {
      const Request req = decode_request(line);
      reply = encode_response(req.id, mock.query(req.image_path, req.task));
    } catch (const Error& e) {
      reply = encode_response(0, protocol_error(e.message()));
    }
    out << reply << '\n' << std::flush;
  }
}

// ---------------------------------------------------------------------------

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> args;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (char c : command) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        current.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) args.push_back(std::move(current));
      current.clear();
      in_token = false;
    } else {
      current.push_back(c);
      in_token = true;
    }
  }
  if (quote != 0) throw Error(ErrorKind::InvalidArgument, "unterminated quote in command");
  if (in_token) args.push_back(std::move(current));
  return args;
}

std::unique_ptr<SutAdapter> make_adapter(std::string_view spec, std::chrono::milliseconds timeout) {
  if (spec == "mock") return std::make_unique<MockAdapter>();
  SubprocessConfig config;
  config.command = split_command(spec);
  config.timeout = timeout;
  if (config.command.empty()) throw Error(ErrorKind::InvalidArgument, "empty SUT command");
  return std::make_unique<SubprocessAdapter>(std::move(config));
}

}  // namespace vt
