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

#include <Eigen/Core>

#include <cmath>

#include "visiontest/image.hpp"

namespace vt {

template <typename Scalar>
using Kernel = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Normalized 1-D Gaussian taps exp(-k^2 / 2 sigma^2) for k in [-radius, radius].
template <typename Scalar = double>
Kernel<Scalar> gaussian_kernel(Scalar sigma, int radius) {
  Kernel<Scalar> taps(2 * radius + 1);
  const Scalar denom = Scalar(2) * sigma * sigma;
  for (int k = -radius; k <= radius; ++k) {
    taps(k + radius) = std::exp(-Scalar(k * k) / denom);
  }
  return taps / taps.sum();
}

/// Mirror index without repeating the edge sample: -1 -> 1, n -> n-2.
/// Periodic with period 2(n-1), so radii larger than the extent are fine.
inline int reflect_101(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

/// Same-size separable convolution with reflect-101 borders. Rows are filtered
/// first, then columns; each output tap sum runs in ascending kernel order.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Plane<Scalar> convolve_separable_reflect(const Eigen::ArrayBase<Derived>& src, const Kernel<Scalar>& taps) {
  const int rows = static_cast<int>(src.rows());
  const int cols = static_cast<int>(src.cols());
  const int radius = static_cast<int>(taps.size() / 2);
  Plane<Scalar> horizontal(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      Scalar acc(0);
      for (int k = -radius; k <= radius; ++k) acc += taps(k + radius) * src(y, reflect_101(x + k, cols));
      horizontal(y, x) = acc;
    }
  }
  Plane<Scalar> out(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      Scalar acc(0);
      for (int k = -radius; k <= radius; ++k) acc += taps(k + radius) * horizontal(reflect_101(y + k, rows), x);
      out(y, x) = acc;
    }
  }
  return out;
}

/// Valid-mode separable filtering: output is (rows-n+1) x (cols-n+1) for an
/// n-tap kernel, no padding.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Plane<Scalar> filter_separable_valid(const Eigen::ArrayBase<Derived>& src, const Kernel<Scalar>& taps) {
  const Eigen::Index n = taps.size();
  const Eigen::Index out_rows = src.rows() - n + 1;
  const Eigen::Index out_cols = src.cols() - n + 1;
  Plane<Scalar> horizontal(src.rows(), out_cols);
  for (Eigen::Index y = 0; y < src.rows(); ++y) {
    for (Eigen::Index x = 0; x < out_cols; ++x) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < n; ++k) acc += taps(k) * src(y, x + k);
      horizontal(y, x) = acc;
    }
  }
  Plane<Scalar> out(out_rows, out_cols);
  for (Eigen::Index y = 0; y < out_rows; ++y) {
    for (Eigen::Index x = 0; x < out_cols; ++x) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < n; ++k) acc += taps(k) * horizontal(y + k, x);
      out(y, x) = acc;
    }
  }
  return out;
}

}  // namespace vt
