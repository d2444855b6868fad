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
#include "visiontest/testgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <system_error>

#include "visiontest/error.hpp"
#include "visiontest/image_io.hpp"

namespace vt {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view task_name(Task task) {
  return task == Task::Classification ? "classification" : "detection";
}

std::string_view suite_kind_name(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Initial: return "initial";
    case SuiteKind::Similar: return "similar";
    case SuiteKind::Severe: return "severe";
  }
  return "unknown";
}

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& message) {
  throw Error(ErrorKind::SchemaViolation, message, pointer);
}

std::string sanitize_for_filename(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

std::string path_for_manifest(const fs::path& image, const fs::path& base_dir) {
  if (!base_dir.empty() && image.is_absolute()) {
    const fs::path rel = image.lexically_normal().lexically_relative(fs::absolute(base_dir).lexically_normal());
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  }
  return image.generic_string();
}

fs::path path_from_manifest(const std::string& text, const fs::path& base_dir) {
  fs::path p(text);
  if (p.is_relative()) p = fs::absolute(base_dir) / p;
  return p.lexically_normal();
}

bool expected_matches_task(const ExpectedOutput& e, Task task) {
  if (is_err(e)) return true;
  return task == Task::Classification ? std::holds_alternative<ExpectClassification>(e)
                                      : std::holds_alternative<ExpectDetections>(e);
}

}  // namespace

void validate_suite(const TestSuite& suite) {
  if (suite.kind == SuiteKind::Initial && suite.cases.empty()) {
    schema("/cases", "an initial test suite must be non-empty");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < suite.cases.size(); ++i) {
    const TestCase& tc = suite.cases[i];
    const std::string at = "/cases/" + std::to_string(i);
    if (tc.id.empty()) schema(at + "/id", "id must be non-empty");
    if (!ids.insert(tc.id).second) schema(at + "/id", "duplicate id \"" + tc.id + "\"");
    if (tc.image.empty()) schema(at + "/image", "image path must be non-empty");
    if (!expected_matches_task(tc.expected, suite.task)) {
      schema(at + "/expected", "expected output does not match task " + std::string(task_name(suite.task)));
    }
    if (suite.kind == SuiteKind::Severe && !is_err(tc.expected)) {
      schema(at + "/expected", "every case of a severe suite must expect err");
    }
    if (suite.kind != SuiteKind::Severe && is_err(tc.expected)) {
      schema(at + "/expected", "err is only valid in severe suites");
    }
    if (const auto* det = std::get_if<ExpectDetections>(&tc.expected)) {
      for (std::size_t k = 0; k < det->boxes.size(); ++k) {
        const Box& b = det->boxes[k].bbox;
        if (b.x < 0 || b.y < 0 || !(b.w > 0) || !(b.h > 0)) {
          schema(at + "/expected/boxes/" + std::to_string(k) + "/bbox",
                 "bbox needs x,y >= 0 and w,h > 0");
        }
      }
    }
    const bool generated = suite.kind != SuiteKind::Initial;
    if (generated != tc.provenance.has_value()) {
      schema(at + "/provenance", generated ? "generated cases must carry provenance"
                                           : "initial cases must not carry provenance");
    }
  }
}

GeneratedSuites generate_suites(const TestSuite& initial, std::span<const Modification> mods,
                                const fs::path& out_dir) {
  if (initial.kind != SuiteKind::Initial) {
    throw Error(ErrorKind::InvalidArgument, "generation starts from an initial suite");
  }
  if (mods.empty()) throw Error(ErrorKind::EmptyModificationList, "no modifications given");
  validate_suite(initial);
  for (std::size_t m = 0; m < mods.size(); ++m) {
    try {
      validate(mods[m]);
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), "/" + std::to_string(m) + e.pointer());
    }
  }

  const fs::path dir = fs::absolute(out_dir).lexically_normal();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  GeneratedSuites out;
  out.similar = TestSuite{SuiteKind::Similar, initial.task, {}};
  out.severe = TestSuite{SuiteKind::Severe, initial.task, {}};
  std::set<std::string> used_ids;
  std::set<std::string> used_stems;

  for (const TestCase& source : initial.cases) {
    const Image image = load_image(source.image);
    for (std::size_t m = 0; m < mods.size(); ++m) {
      Modification mod = mods[m];
      mod.sim = resolve_sim(mod, image.width(), image.height());

      const std::string tail = "__" + std::string(op_name(mod.op())) + "__" + std::to_string(mod.seed);
      std::string id = source.id + tail;
      std::string stem = sanitize_for_filename(source.id) + tail;
      for (int k = 2; used_ids.count(id) != 0 || used_stems.count(stem) != 0; ++k) {
        id = source.id + tail + "__" + std::to_string(k);
        stem = sanitize_for_filename(source.id) + tail + "__" + std::to_string(k);
      }
      used_ids.insert(id);
      used_stems.insert(stem);

      const fs::path target = dir / (stem + ".png");
      Image modified = [&] {
        try {
          return apply(mod, image);
        } catch (const Error& e) {
          throw Error(e.kind(), source.id + ": " + e.message(), "/" + std::to_string(m) + e.pointer());
        }
      }();
      save_image(modified, target);

      TestCase generated;
      generated.id = id;
      generated.image = target;
      generated.provenance = Provenance{source.id, source.image, mod};
      if (*mod.sim) {
        generated.expected = source.expected;
        out.similar.cases.push_back(std::move(generated));
      } else {
        generated.expected = ExpectErr{};
        out.severe.cases.push_back(std::move(generated));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

ordered_json number_to_json(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

ordered_json box_to_json(const Box& box) {
  return ordered_json::array({number_to_json(box.x), number_to_json(box.y), number_to_json(box.w), number_to_json(box.h)});
}

ordered_json expected_to_json(const ExpectedOutput& expected) {
  ordered_json j;
  if (const auto* c = std::get_if<ExpectClassification>(&expected)) {
    j["type"] = "classification";
    j["label"] = c->label;
  } else if (const auto* d = std::get_if<ExpectDetections>(&expected)) {
    j["type"] = "detections";
    j["boxes"] = ordered_json::array();
    for (const auto& b : d->boxes) {
      j["boxes"].push_back({{"label", b.label}, {"bbox", box_to_json(b.bbox)}});
    }
  } else {
    j["type"] = "err";
  }
  return j;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& pointer) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema(pointer + "/" + key, "required field is missing");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& pointer) {
  const json& v = require(obj, key, pointer);
  if (!v.is_string()) schema(pointer + "/" + key, "must be a string");
  return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& pointer) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema(pointer + "/" + key, "unknown field");
    }
  }
}

Box box_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 4) schema(pointer, "bbox must be an array [x, y, w, h]");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) schema(pointer + "/" + std::to_string(i), "must be a number");
  }
  return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

ExpectedOutput expected_from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) schema(pointer, "expected must be an object");
  const std::string type = require_string(j, "type", pointer);
  if (type == "classification") {
    reject_unknown(j, {"type", "label"}, pointer);
    return ExpectClassification{require_string(j, "label", pointer)};
  }
  if (type == "detections") {
    reject_unknown(j, {"type", "boxes"}, pointer);
    const json& boxes = require(j, "boxes", pointer);
    if (!boxes.is_array()) schema(pointer + "/boxes", "must be an array");
    ExpectDetections det;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string at = pointer + "/boxes/" + std::to_string(i);
      if (!boxes[i].is_object()) schema(at, "box must be an object");
      reject_unknown(boxes[i], {"label", "bbox"}, at);
      det.boxes.push_back({require_string(boxes[i], "label", at), box_from_json(require(boxes[i], "bbox", at), at + "/bbox")});
    }
    return det;
  }
  if (type == "err") {
    reject_unknown(j, {"type"}, pointer);
    return ExpectErr{};
  }
  schema(pointer + "/type", "must be \"classification\", \"detections\" or \"err\"");
}

}  // namespace

TestSuite suite_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) schema("", "manifest must be a JSON object");
  reject_unknown(j, {"schema", "kind", "task", "cases"}, "");
  const json& version = require(j, "schema", "");
  if (!version.is_number_integer() || version.get<int>() != kManifestSchemaVersion) {
    schema("/schema", "unsupported schema version (expected " + std::to_string(kManifestSchemaVersion) + ")");
  }

  TestSuite suite;
  const std::string kind = require_string(j, "kind", "");
  if (kind == "initial") {
    suite.kind = SuiteKind::Initial;
  } else if (kind == "similar") {
    suite.kind = SuiteKind::Similar;
  } else if (kind == "severe") {
    suite.kind = SuiteKind::Severe;
  } else {
    schema("/kind", "must be \"initial\", \"similar\" or \"severe\"");
  }
  const std::string task = require_string(j, "task", "");
  if (task == "classification") {
    suite.task = Task::Classification;
  } else if (task == "detection") {
    suite.task = Task::Detection;
  } else {
    schema("/task", "must be \"classification\" or \"detection\"");
  }

  const json& cases = require(j, "cases", "");
  if (!cases.is_array()) schema("/cases", "must be an array");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string at = "/cases/" + std::to_string(i);
    const json& c = cases[i];
    if (!c.is_object()) schema(at, "case must be an object");
    reject_unknown(c, {"id", "image", "expected", "provenance"}, at);
    TestCase tc;
    tc.id = require_string(c, "id", at);
    tc.image = path_from_manifest(require_string(c, "image", at), base_dir);
    tc.expected = expected_from_json(require(c, "expected", at), at + "/expected");
    if (const auto p = c.find("provenance"); p != c.end()) {
      const std::string pat = at + "/provenance";
      if (!p->is_object()) schema(pat, "provenance must be an object");
      reject_unknown(*p, {"source_id", "source_image", "modification"}, pat);
      Provenance prov;
      prov.source_id = require_string(*p, "source_id", pat);
      prov.source_image = path_from_manifest(require_string(*p, "source_image", pat), base_dir);
      try {
        prov.modification = modification_from_json(require(*p, "modification", pat), pat + "/modification");
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SchemaViolation) throw;
        schema(e.pointer(), e.message());
      }
      if (!prov.modification.sim.has_value()) schema(pat + "/modification/sim", "generated cases record sim");
      tc.provenance = std::move(prov);
    }
    suite.cases.push_back(std::move(tc));
  }
  validate_suite(suite);
  return suite;
}

ordered_json suite_to_json(const TestSuite& suite, const fs::path& base_dir) {
  ordered_json j;
  j["schema"] = kManifestSchemaVersion;
  j["kind"] = suite_kind_name(suite.kind);
  j["task"] = task_name(suite.task);
  j["cases"] = ordered_json::array();
  for (const TestCase& tc : suite.cases) {
    ordered_json c;
    c["id"] = tc.id;
    c["image"] = path_for_manifest(tc.image, base_dir);
    c["expected"] = expected_to_json(tc.expected);
    if (tc.provenance) {
      c["provenance"] = {{"source_id", tc.provenance->source_id},
                         {"source_image", path_for_manifest(tc.provenance->source_image, base_dir)},
                         {"modification", to_json(tc.provenance->modification)}};
    }
    j["cases"].push_back(std::move(c));
  }
  return j;
}

json read_json_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaViolation, path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

TestSuite load_suite(const fs::path& path) {
  return suite_from_json(read_json_file(path), fs::absolute(path).parent_path());
}

void save_suite(const TestSuite& suite, const fs::path& path) {
  validate_suite(suite);
  write_text_file(path, suite_to_json(suite, fs::absolute(path).parent_path()).dump(2) + "\n");
}

std::vector<Modification> modifications_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaViolation, "modification list must be a JSON array", "");
  std::vector<Modification> mods;
  for (std::size_t i = 0; i < j.size(); ++i) {
    mods.push_back(modification_from_json(j[i], "/" + std::to_string(i)));
  }
  return mods;
}

std::vector<Modification> load_modifications(const fs::path& path) {
  return modifications_from_json(read_json_file(path));
}

}  // namespace vt
