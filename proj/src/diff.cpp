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
#include "visiontest/diff.hpp"

#include <string>

namespace vt {

double mse(const Image& a, const Image& b) {
  if (!a.same_size(b)) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  const auto pa = a.bytes();
  const auto pb = b.bytes();
  double total = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    total += d * d;
  }
  return total / static_cast<double>(pa.size());
}

// Instantiated here so most translation units link against a compiled copy.
template SsimResult<double> mssim<double>(const Image&, const Image&, const SsimParams<double>&);
template SsimResult<float> mssim<float>(const Image&, const Image&, const SsimParams<float>&);

}  // namespace vt
