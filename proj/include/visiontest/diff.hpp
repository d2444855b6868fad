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

#include <string>

#include "visiontest/error.hpp"
#include "visiontest/filter.hpp"
#include "visiontest/image.hpp"

namespace vt {

/// Constants of the Gaussian-windowed SSIM. C1 = (k1 L)^2, C2 = (k2 L)^2.
template <typename Scalar = double>
struct SsimParams {
  int window = 11;
  Scalar sigma = Scalar(1.5);
  Scalar k1 = Scalar(0.01);
  Scalar k2 = Scalar(0.03);
  Scalar dynamic_range = Scalar(255);

  Scalar c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  Scalar c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }

  void validate() const {
    if (window < 3 || window % 2 == 0) {
      throw Error(ErrorKind::InvalidParams, "window must be odd and >= 3", "/window");
    }
    if (!(sigma > 0)) throw Error(ErrorKind::InvalidParams, "sigma must be positive", "/sigma");
    if (!(k1 > 0)) throw Error(ErrorKind::InvalidParams, "k1 must be positive", "/k1");
    if (!(k2 > 0)) throw Error(ErrorKind::InvalidParams, "k2 must be positive", "/k2");
    if (!(dynamic_range > 0)) {
      throw Error(ErrorKind::InvalidParams, "dynamic range must be positive", "/dynamic_range");
    }
  }
};

template <typename Scalar = double>
struct SsimResult {
  Scalar mean = Scalar(0);
  /// One value per fully interior window position, (h-window+1) x (w-window+1).
  Plane<Scalar> map;
};

/// Pointwise SSIM from local statistics. Arguments are array expressions of
/// identical shape; returns an expression.
template <typename MuX, typename MuY, typename VarX, typename VarY, typename Cov, typename Scalar>
auto ssim_index(const Eigen::ArrayBase<MuX>& mu_x, const Eigen::ArrayBase<MuY>& mu_y,
                const Eigen::ArrayBase<VarX>& var_x, const Eigen::ArrayBase<VarY>& var_y,
                const Eigen::ArrayBase<Cov>& cov, Scalar c1, Scalar c2) {
  return ((Scalar(2) * mu_x * mu_y + c1) * (Scalar(2) * cov + c2)) /
         ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
}

/// Mean SSIM over valid windows of two equally sized planes.
///
/// Local statistics come from separable Gaussian filtering of x, y, x^2, y^2
/// and xy; the 11x11 weights are the outer product of the normalized 1-D
/// kernel. No padding. The mean is accumulated in row-major index order.
template <typename Scalar = double, typename DerivedA, typename DerivedB>
SsimResult<Scalar> mssim_planes(const Eigen::ArrayBase<DerivedA>& a, const Eigen::ArrayBase<DerivedB>& b,
                                const SsimParams<Scalar>& params = {}) {
  params.validate();
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "images differ in size");
  }
  if (a.rows() < params.window || a.cols() < params.window) {
    throw Error(ErrorKind::ImageTooSmall, "both dimensions must be at least the window size (" +
                                              std::to_string(params.window) + ")");
  }
  const Plane<Scalar> x = a.template cast<Scalar>();
  const Plane<Scalar> y = b.template cast<Scalar>();
  const Kernel<Scalar> taps = gaussian_kernel<Scalar>(params.sigma, params.window / 2);

  const Plane<Scalar> mu_x = filter_separable_valid(x, taps);
  const Plane<Scalar> mu_y = filter_separable_valid(y, taps);
  const Plane<Scalar> var_x = filter_separable_valid(Plane<Scalar>(x * x), taps) - mu_x * mu_x;
  const Plane<Scalar> var_y = filter_separable_valid(Plane<Scalar>(y * y), taps) - mu_y * mu_y;
  const Plane<Scalar> cov = filter_separable_valid(Plane<Scalar>(x * y), taps) - mu_x * mu_y;

  SsimResult<Scalar> result;
  result.map = ssim_index(mu_x, mu_y, var_x, var_y, cov, params.c1(), params.c2());
  Scalar total(0);
  for (Eigen::Index r = 0; r < result.map.rows(); ++r) {
    for (Eigen::Index c = 0; c < result.map.cols(); ++c) total += result.map(r, c);
  }
  result.mean = total / static_cast<Scalar>(result.map.size());
  return result;
}

/// SSIM of two images, computed on their BT.601 luminance planes.
template <typename Scalar = double>
SsimResult<Scalar> mssim(const Image& a, const Image& b, const SsimParams<Scalar>& params = {}) {
  if (!a.same_size(b)) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  return mssim_planes<Scalar>(luminance<Scalar>(a), luminance<Scalar>(b), params);
}

extern template SsimResult<double> mssim<double>(const Image&, const Image&, const SsimParams<double>&);
extern template SsimResult<float> mssim<float>(const Image&, const Image&, const SsimParams<float>&);

/// Mean over all pixels and channels of the squared difference.
double mse(const Image& a, const Image& b);

}  // namespace vt
