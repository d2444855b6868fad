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

#include <cmath>
#include <vector>

#include "visiontest/image.hpp"

namespace vt::testing {

/// Direct transcription of the SSIM definition: 2-D Gaussian weights summed
/// per window, variances taken about the window mean. Deliberately slow.
inline double naive_mssim(const Image& a, const Image& b) {
  constexpr int n = 11;
  constexpr double sigma = 1.5;
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);

  double weights[n][n];
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      const double du = u - n / 2;
      const double dv = v - n / 2;
      weights[v][u] = std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
      total += weights[v][u];
    }
  }
  for (auto& row : weights)
    for (double& w : row) w /= total;

  auto luma = [](const Image& img, int x, int y) {
    const Rgb p = img.at(x, y);
    return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  };

  double sum = 0.0;
  int windows = 0;
  for (int y0 = 0; y0 + n <= a.height(); ++y0) {
    for (int x0 = 0; x0 + n <= a.width(); ++x0) {
      double mx = 0.0, my = 0.0;
      for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
          mx += weights[v][u] * luma(a, x0 + u, y0 + v);
          my += weights[v][u] * luma(b, x0 + u, y0 + v);
        }
      double vx = 0.0, vy = 0.0, cxy = 0.0;
      for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
          const double dx = luma(a, x0 + u, y0 + v) - mx;
          const double dy = luma(b, x0 + u, y0 + v) - my;
          vx += weights[v][u] * dx * dx;
          vy += weights[v][u] * dy * dy;
          cxy += weights[v][u] * dx * dy;
        }
      sum += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return sum / windows;
}

inline double naive_mse(const Image& a, const Image& b) {
  double sum = 0.0;
  const auto pa = a.bytes();
  const auto pb = b.bytes();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

}  // namespace vt::testing
