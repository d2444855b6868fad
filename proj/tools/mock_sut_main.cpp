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
// Standalone system under test speaking the line protocol on stdin/stdout,
// backed by the built-in color-blob detector.
#include <iostream>

#include "visiontest/sut.hpp"

int main() {
  std::ios::sync_with_stdio(false);
  vt::serve_mock(std::cin, std::cout);
  return 0;
}
