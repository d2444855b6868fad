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

#include <array>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "visiontest/image_io.hpp"
#include "visiontest/testgen.hpp"

namespace vt::testing {

struct BoxSpec {
  Rgb color;
  const char* label;
  int x;
  int y;
};

inline constexpr std::array<BoxSpec, 5> kCorpus = {{
    {kRed, "red", 10, 10},
    {kGreen, "green", 30, 8},
    {kBlue, "blue", 5, 36},
    {kRed, "red", 40, 40},
    {kGreen, "green", 22, 25},
}};

/// Five 64x64 single-box detection images and their initial suite, written
/// under dir. The manifest is saved as dir/initial.json.
inline TestSuite write_box_corpus(const std::filesystem::path& dir) {
  TestSuite suite{SuiteKind::Initial, Task::Detection, {}};
  for (std::size_t i = 0; i < kCorpus.size(); ++i) {
    const BoxSpec& spec = kCorpus[i];
    const std::string id = "scene" + std::to_string(i + 1);
    const auto path = dir / "images" / (id + ".png");
    save_image(box_scene(spec.color, spec.x, spec.y), path);
    suite.cases.push_back({id, path,
                           ExpectDetections{{{spec.label, Box{double(spec.x), double(spec.y), 20.0, 20.0}}}}, {}});
  }
  save_suite(suite, dir / "initial.json");
  return suite;
}

}  // namespace vt::testing
