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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "visiontest/image.hpp"

namespace vt {

enum class OpKind { Invert, Flip, Blur, Brightness, PixelNoise, Affine, Weather, Blackout };
enum class FlipAxis { Horizontal, Vertical };
enum class WeatherKind { Fog, Rain, Snow, Sun, Shadow };

struct InvertParams {
  friend bool operator==(const InvertParams&, const InvertParams&) = default;
};

struct FlipParams {
  FlipAxis axis = FlipAxis::Horizontal;
  friend bool operator==(const FlipParams&, const FlipParams&) = default;
};

/// strength in [0,1]; sigma = 10 * strength.
struct BlurParams {
  double strength = 0.0;
  friend bool operator==(const BlurParams&, const BlurParams&) = default;
};

/// factor in [-1,1]; negative darkens, positive brightens.
struct BrightnessParams {
  double factor = 0.0;
  friend bool operator==(const BrightnessParams&, const BrightnessParams&) = default;
};

struct PixelNoiseParams {
  std::uint64_t count = 0;
  friend bool operator==(const PixelNoiseParams&, const PixelNoiseParams&) = default;
};

/// Forward map (x, y) -> (a x + b y + c, d x + e y + f) in pixel coordinates.
struct AffineParams {
  double a = 1.0, b = 0.0, c = 0.0;
  double d = 0.0, e = 1.0, f = 0.0;

  Eigen::Matrix2d linear() const {
    Eigen::Matrix2d m;
    m << a, b, d, e;
    return m;
  }
  Eigen::Vector2d offset() const { return {c, f}; }
  double determinant() const { return a * e - b * d; }
  bool is_identity() const { return *this == AffineParams{}; }

  friend bool operator==(const AffineParams&, const AffineParams&) = default;
};

struct WeatherParams {
  WeatherKind kind = WeatherKind::Fog;
  double intensity = 0.0;
  friend bool operator==(const WeatherParams&, const WeatherParams&) = default;
};

struct BlackoutParams {
  friend bool operator==(const BlackoutParams&, const BlackoutParams&) = default;
};

using OpParams = std::variant<InvertParams, FlipParams, BlurParams, BrightnessParams, PixelNoiseParams,
                              AffineParams, WeatherParams, BlackoutParams>;

/// One modification operator instance together with its sim classification.
///
/// `sim` left unset means "use the default classification table"; see
/// resolve_sim(). The seed is carried by every operator and ignored by the
/// deterministic ones.
struct Modification {
  OpParams params;
  std::uint64_t seed = 0;
  std::optional<bool> sim;

  OpKind op() const { return static_cast<OpKind>(params.index()); }

  friend bool operator==(const Modification&, const Modification&) = default;
};

/// Every tunable constant used by the operators and the default sim table.
namespace constants {
inline constexpr double kBlurSigmaPerStrength = 10.0;
inline constexpr double kBlurRadiusInSigmas = 3.0;

inline constexpr int kFogLatticeSize = 9;

inline constexpr int kSnowLumaThresholdPerMille = 140'000;  // luma > 140
inline constexpr double kSnowPixelsPerDot = 200.0;
inline constexpr int kSnowDotRadius = 1;

inline constexpr double kRainPixelsPerStreak = 150.0;
inline constexpr double kRainAngleFromVerticalDeg = -20.0;
inline constexpr int kRainLength = 10;
inline constexpr double kRainColor = 200.0;
inline constexpr double kRainAlpha = 0.5;
inline constexpr double kRainBlurStrength = 0.05;

inline constexpr double kSunGain = 200.0;
inline constexpr double kSunRadiusFraction = 0.4;
inline constexpr double kSunCenterBand = 1.0 / 3.0;  // center lies in the upper third

inline constexpr int kShadowPerIntensity = 3;
inline constexpr double kShadowDarkening = 0.5;
inline constexpr double kShadowMinRadius = 0.15;  // fraction of the image extent
inline constexpr double kShadowMaxRadius = 0.4;

inline constexpr double kAffineDeterminantEpsilon = 1e-9;
inline constexpr double kAffineEdgeTolerance = 1e-9;

// Default sim table.
inline constexpr double kSimMaxBrightness = 0.5;
inline constexpr double kSimMaxBlur = 0.3;
inline constexpr double kSimMaxPixelNoiseFraction = 0.01;
inline constexpr double kSimMaxWeather = 0.7;
}  // namespace constants

std::string_view op_name(OpKind op);
std::optional<OpKind> parse_op_name(std::string_view name);
std::string_view weather_name(WeatherKind kind);
std::string_view axis_name(FlipAxis axis);

/// Flip and affine move content; generated suites keep the expected output
/// unchanged for them, so reports flag such rows.
bool is_geometric(OpKind op);

/// Checks parameter ranges and the sim/blackout rule.
/// Throws Error(InvalidParams) with a JSON pointer such as "/params/strength",
/// or Error(DegenerateTransform) for a singular affine matrix.
void validate(const Modification& mod);

/// Default classification. pixel_noise depends on the image size, all other
/// operators do not.
bool default_sim(const OpParams& params, int width, int height);

/// Explicit `sim` if set, otherwise default_sim for an image of the given size.
bool resolve_sim(const Modification& mod, int width, int height);

/// Validates, then dispatches to the operator. Pure in (mod, img).
Image apply(const Modification& mod, const Image& img);

Image invert(const Image& img);
Image flip(const Image& img, FlipAxis axis);
Image blur(const Image& img, double strength);
Image brightness(const Image& img, double factor);
Image pixel_noise(const Image& img, std::uint64_t count, std::uint64_t seed);
Image affine_warp(const Image& img, const AffineParams& params);
Image weather(const Image& img, WeatherKind kind, double intensity, std::uint64_t seed);
Image blackout(const Image& img);

/// Seeded fog density in [0,1]: a kFogLatticeSize^2 uniform lattice
/// bilinearly interpolated over the image.
Plane<double> fog_mask(int width, int height, std::uint64_t seed);

namespace detail {
/// c + (255 - c) * intensity * mask, rounded and clamped.
std::uint8_t fog_blend(std::uint8_t c, double intensity, double mask);
}  // namespace detail

// Serialization: {"op": str, "params": {...}, "seed": u64, "sim": bool}.
// "sim" is omitted when unresolved. Parsing is strict: unknown keys and
// out-of-range values are InvalidParams errors whose pointer is prefixed by
// `pointer`.
nlohmann::ordered_json params_to_json(const OpParams& params);
nlohmann::ordered_json to_json(const Modification& mod);
Modification modification_from_json(const nlohmann::json& j, const std::string& pointer = "");
OpParams params_from_json(OpKind op, const nlohmann::json& params, const std::string& pointer = "/params");

/// Compact one-line description, e.g. "brightness{"factor":0.1}".
std::string describe(const Modification& mod);

}  // namespace vt
