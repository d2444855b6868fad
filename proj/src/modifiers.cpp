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
#include "visiontest/modifiers.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "visiontest/error.hpp"
#include "visiontest/filter.hpp"
#include "visiontest/rng.hpp"

namespace vt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint8_t round_clamp(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

[[noreturn]] void invalid(const std::string& pointer, const std::string& message) {
  throw Error(ErrorKind::InvalidParams, message, pointer);
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string number_text(double v) { return json(v).dump(); }

}  // namespace

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::Invert: return "invert";
    case OpKind::Flip: return "flip";
    case OpKind::Blur: return "blur";
    case OpKind::Brightness: return "brightness";
    case OpKind::PixelNoise: return "pixel_noise";
    case OpKind::Affine: return "affine";
    case OpKind::Weather: return "weather";
    case OpKind::Blackout: return "blackout";
  }
  return "unknown";
}

std::optional<OpKind> parse_op_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(OpKind::Blackout); ++i) {
    if (op_name(static_cast<OpKind>(i)) == name) return static_cast<OpKind>(i);
  }
  return std::nullopt;
}

std::string_view weather_name(WeatherKind kind) {
  switch (kind) {
    case WeatherKind::Fog: return "fog";
    case WeatherKind::Rain: return "rain";
    case WeatherKind::Snow: return "snow";
    case WeatherKind::Sun: return "sun";
    case WeatherKind::Shadow: return "shadow";
  }
  return "unknown";
}

std::string_view axis_name(FlipAxis axis) {
  return axis == FlipAxis::Horizontal ? "horizontal" : "vertical";
}

bool is_geometric(OpKind op) { return op == OpKind::Flip || op == OpKind::Affine; }

void validate(const Modification& mod) {
  std::visit(Overloaded{
                 [](const InvertParams&) {},
                 [](const FlipParams&) {},
                 [](const BlackoutParams&) {},
                 [](const BlurParams& p) {
                   if (!in_range(p.strength, 0.0, 1.0)) {
                     invalid("/params/strength", "must be in [0,1], got " + number_text(p.strength));
                   }
                 },
                 [](const BrightnessParams& p) {
                   if (!in_range(p.factor, -1.0, 1.0)) {
                     invalid("/params/factor", "must be in [-1,1], got " + number_text(p.factor));
                   }
                 },
                 [](const PixelNoiseParams&) {},
                 [](const AffineParams& p) {
                   for (double v : {p.a, p.b, p.c, p.d, p.e, p.f}) {
                     if (!std::isfinite(v)) invalid("/params", "affine coefficients must be finite");
                   }
                   if (std::abs(p.determinant()) <= constants::kAffineDeterminantEpsilon) {
                     throw Error(ErrorKind::DegenerateTransform,
                                 "affine matrix is singular (|det| <= 1e-9)", "/params");
                   }
                 },
                 [](const WeatherParams& p) {
                   if (!in_range(p.intensity, 0.0, 1.0)) {
                     invalid("/params/intensity", "must be in [0,1], got " + number_text(p.intensity));
                   }
                 },
             },
             mod.params);
  if (mod.op() == OpKind::Blackout && mod.sim.value_or(false)) {
    invalid("/sim", "blackout is never similarity-preserving");
  }
}

bool default_sim(const OpParams& params, int width, int height) {
  return std::visit(
      Overloaded{
          [](const InvertParams&) { return false; },
          [](const FlipParams&) { return false; },
          [](const BlackoutParams&) { return false; },
          [](const BlurParams& p) { return p.strength <= constants::kSimMaxBlur; },
          [](const BrightnessParams& p) { return std::abs(p.factor) <= constants::kSimMaxBrightness; },
          [&](const PixelNoiseParams& p) {
            const double pixels = static_cast<double>(width) * static_cast<double>(height);
            return static_cast<double>(p.count) <= constants::kSimMaxPixelNoiseFraction * pixels;
          },
          [](const AffineParams& p) { return p.is_identity(); },
          [](const WeatherParams& p) { return p.intensity <= constants::kSimMaxWeather; },
      },
      params);
}

bool resolve_sim(const Modification& mod, int width, int height) {
  if (mod.op() == OpKind::Blackout) return false;
  return mod.sim.has_value() ? *mod.sim : default_sim(mod.params, width, height);
}

// ---------------------------------------------------------------------------
// Operators

Image invert(const Image& img) {
  Image out = img;
  for (auto& c : out.bytes()) c = static_cast<std::uint8_t>(255 - c);
  return out;
}

Image flip(const Image& img, FlipAxis axis) {
  Image out(img.width(), img.height());
  const int w = img.width();
  const int h = img.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int sx = axis == FlipAxis::Horizontal ? w - 1 - x : x;
      const int sy = axis == FlipAxis::Vertical ? h - 1 - y : y;
      out.set(x, y, img.at(sx, sy));
    }
  }
  return out;
}

Image blur(const Image& img, double strength) {
  if (!in_range(strength, 0.0, 1.0)) {
    invalid("/params/strength", "must be in [0,1], got " + number_text(strength));
  }
  if (strength == 0.0) return img;
  const double sigma = constants::kBlurSigmaPerStrength * strength;
  const int radius = static_cast<int>(std::ceil(constants::kBlurRadiusInSigmas * sigma));
  const Kernel<double> taps = gaussian_kernel<double>(sigma, radius);
  Image out = img;
  for (int c = 0; c < 3; ++c) {
    store_channel(convolve_separable_reflect(channel_plane<double>(img, c), taps), c, out);
  }
  return out;
}

Image brightness(const Image& img, double factor) {
  if (!in_range(factor, -1.0, 1.0)) {
    invalid("/params/factor", "must be in [-1,1], got " + number_text(factor));
  }
  Image out = img;
  const double scale = 1.0 + factor;
  for (auto& c : out.bytes()) c = round_clamp(c * scale);
  return out;
}

Image pixel_noise(const Image& img, std::uint64_t count, std::uint64_t seed) {
  const std::uint64_t n = img.pixel_count();
  if (count > n) {
    invalid("/params/count", "count " + std::to_string(count) + " exceeds pixel count " + std::to_string(n));
  }
  Image out = img;
  if (count == 0) return out;
  // Partial Fisher-Yates: the first `count` slots are a uniform sample without replacement.
  std::vector<std::uint32_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0u);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.below(n - i);
    std::swap(positions[i], positions[j]);
    const int x = static_cast<int>(positions[i] % static_cast<std::uint32_t>(img.width()));
    const int y = static_cast<int>(positions[i] / static_cast<std::uint32_t>(img.width()));
    out.set(x, y, Rgb{0, 0, 0});
  }
  return out;
}

Image affine_warp(const Image& img, const AffineParams& params) {
  validate(Modification{params, 0, std::nullopt});
  const Eigen::Matrix2d inverse = params.linear().inverse();
  const Eigen::Vector2d offset = params.offset();
  const int w = img.width();
  const int h = img.height();
  const double tol = constants::kAffineEdgeTolerance;
  Image out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const Eigen::Vector2d src = inverse * (Eigen::Vector2d(u, v) - offset);
      const double sx = src.x();
      const double sy = src.y();
      if (!(sx >= -tol && sx <= (w - 1) + tol && sy >= -tol && sy <= (h - 1) + tol)) continue;
      const double cx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
      const double cy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
      const int x0 = static_cast<int>(std::floor(cx));
      const int y0 = static_cast<int>(std::floor(cy));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = cx - x0;
      const double fy = cy - y0;
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * img.channel(x0, y0, c) + fx * img.channel(x1, y0, c);
        const double bottom = (1.0 - fx) * img.channel(x0, y1, c) + fx * img.channel(x1, y1, c);
        out.channel(u, v, c) = round_clamp((1.0 - fy) * top + fy * bottom);
      }
    }
  }
  return out;
}

Image blackout(const Image& img) { return Image(img.width(), img.height()); }

// ---------------------------------------------------------------------------
// Weather

Plane<double> fog_mask(int width, int height, std::uint64_t seed) {
  constexpr int n = constants::kFogLatticeSize;
  Rng rng(seed);
  Eigen::Array<double, n, n, Eigen::RowMajor> lattice;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lattice(i, j) = rng.uniform01();
  }
  auto lattice_coord = [](int p, int extent) {
    const double g = extent > 1 ? static_cast<double>(p) * (n - 1) / (extent - 1) : 0.0;
    const int i0 = std::min(static_cast<int>(std::floor(g)), n - 2);
    return std::pair{i0, g - i0};
  };
  Plane<double> mask(height, width);
  for (int y = 0; y < height; ++y) {
    const auto [gy, fy] = lattice_coord(y, height);
    for (int x = 0; x < width; ++x) {
      const auto [gx, fx] = lattice_coord(x, width);
      const double top = (1.0 - fx) * lattice(gy, gx) + fx * lattice(gy, gx + 1);
      const double bottom = (1.0 - fx) * lattice(gy + 1, gx) + fx * lattice(gy + 1, gx + 1);
      mask(y, x) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return mask;
}

namespace detail {
std::uint8_t fog_blend(std::uint8_t c, double intensity, double mask) {
  return round_clamp(c + (255.0 - c) * intensity * mask);
}
}  // namespace detail

namespace {

Image add_fog(const Image& img, double intensity, std::uint64_t seed) {
  const Plane<double> mask = fog_mask(img.width(), img.height(), seed);
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        out.channel(x, y, c) = detail::fog_blend(img.channel(x, y, c), intensity, mask(y, x));
      }
    }
  }
  return out;
}

Image add_snow(const Image& img, double intensity, std::uint64_t seed) {
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      if (299 * p.r + 587 * p.g + 114 * p.b <= constants::kSnowLumaThresholdPerMille) continue;
      for (int c = 0; c < 3; ++c) {
        const double v = img.channel(x, y, c);
        out.channel(x, y, c) = round_clamp(v + (255.0 - v) * intensity);
      }
    }
  }
  const double area = static_cast<double>(img.width()) * img.height();
  const auto dots = static_cast<std::uint64_t>(std::floor(intensity * area / constants::kSnowPixelsPerDot));
  Rng rng(seed);
  constexpr int r = constants::kSnowDotRadius;
  for (std::uint64_t i = 0; i < dots; ++i) {
    const int cx = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width())));
    const int cy = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height())));
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const int x = cx + dx;
        const int y = cy + dy;
        if (dx * dx + dy * dy > r * r || x < 0 || y < 0 || x >= img.width() || y >= img.height()) continue;
        out.set(x, y, Rgb{255, 255, 255});
      }
    }
  }
  return out;
}

Image add_rain(const Image& img, double intensity, std::uint64_t seed) {
  Image out = img;
  const double area = static_cast<double>(img.width()) * img.height();
  const auto streaks =
      static_cast<std::uint64_t>(std::floor(intensity * area / constants::kRainPixelsPerStreak));
  const double angle = constants::kRainAngleFromVerticalDeg * std::numbers::pi / 180.0;
  const double dx = std::sin(angle);
  const double dy = std::cos(angle);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < streaks; ++i) {
    const double x0 = rng.uniform(0.0, img.width());
    const double y0 = rng.uniform(0.0, img.height());
    int last_x = -1;
    int last_y = -1;
    for (int t = 0; t <= constants::kRainLength; ++t) {
      const int x = static_cast<int>(std::floor(x0 + t * dx + 0.5));
      const int y = static_cast<int>(std::floor(y0 + t * dy + 0.5));
      if (x == last_x && y == last_y) continue;
      last_x = x;
      last_y = y;
      if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) continue;
      for (int c = 0; c < 3; ++c) {
        const double v = out.channel(x, y, c);
        out.channel(x, y, c) =
            round_clamp((1.0 - constants::kRainAlpha) * v + constants::kRainAlpha * constants::kRainColor);
      }
    }
  }
  return blur(out, constants::kRainBlurStrength);
}

Image add_sun(const Image& img, double intensity, std::uint64_t seed) {
  Rng rng(seed);
  const double cx = rng.uniform(0.0, img.width());
  const double cy = rng.uniform(0.0, img.height() * constants::kSunCenterBand);
  const double radius = constants::kSunRadiusFraction * std::min(img.width(), img.height());
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double d = std::hypot(x - cx, y - cy);
      const double gain = constants::kSunGain * intensity * std::max(0.0, 1.0 - d / radius);
      for (int c = 0; c < 3; ++c) out.channel(x, y, c) = round_clamp(img.channel(x, y, c) + gain);
    }
  }
  return out;
}

// Convex quadrilateral: four points on an ellipse at increasing parametric angles.
using Quad = std::array<Eigen::Vector2d, 4>;

bool inside_convex(const Quad& q, const Eigen::Vector2d& p) {
  bool any_pos = false;
  bool any_neg = false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Eigen::Vector2d edge = q[(i + 1) % q.size()] - q[i];
    const Eigen::Vector2d rel = p - q[i];
    const double cross = edge.x() * rel.y() - edge.y() * rel.x();
    any_pos |= cross > 0.0;
    any_neg |= cross < 0.0;
  }
  return !(any_pos && any_neg);
}

Image add_shadow(const Image& img, double intensity, std::uint64_t seed) {
  const int count = 1 + static_cast<int>(std::floor(intensity * constants::kShadowPerIntensity));
  const double w = img.width();
  const double h = img.height();
  Rng rng(seed);
  std::vector<Quad> quads;
  for (int i = 0; i < count; ++i) {
    const Eigen::Vector2d center(rng.uniform(0.0, w), rng.uniform(0.0, h));
    const double rx = rng.uniform(constants::kShadowMinRadius, constants::kShadowMaxRadius) * w;
    const double ry = rng.uniform(constants::kShadowMinRadius, constants::kShadowMaxRadius) * h;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Quad q;
    for (int k = 0; k < 4; ++k) {
      const double t = phase + k * std::numbers::pi / 2.0 + rng.uniform(-std::numbers::pi / 6.0, std::numbers::pi / 6.0);
      q[k] = center + Eigen::Vector2d(rx * std::cos(t), ry * std::sin(t));
    }
    quads.push_back(q);
  }
  const double scale = 1.0 - constants::kShadowDarkening * intensity;
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Eigen::Vector2d p(x, y);
      const bool shaded = std::any_of(quads.begin(), quads.end(), [&](const Quad& q) { return inside_convex(q, p); });
      if (!shaded) continue;
      for (int c = 0; c < 3; ++c) out.channel(x, y, c) = round_clamp(img.channel(x, y, c) * scale);
    }
  }
  return out;
}

}  // namespace

Image weather(const Image& img, WeatherKind kind, double intensity, std::uint64_t seed) {
  if (!in_range(intensity, 0.0, 1.0)) {
    invalid("/params/intensity", "must be in [0,1], got " + number_text(intensity));
  }
  if (intensity == 0.0) return img;
  switch (kind) {
    case WeatherKind::Fog: return add_fog(img, intensity, seed);
    case WeatherKind::Rain: return add_rain(img, intensity, seed);
    case WeatherKind::Snow: return add_snow(img, intensity, seed);
    case WeatherKind::Sun: return add_sun(img, intensity, seed);
    case WeatherKind::Shadow: return add_shadow(img, intensity, seed);
  }
  return img;
}

Image apply(const Modification& mod, const Image& img) {
  validate(mod);
  return std::visit(
      Overloaded{
          [&](const InvertParams&) { return invert(img); },
          [&](const FlipParams& p) { return flip(img, p.axis); },
          [&](const BlurParams& p) { return blur(img, p.strength); },
          [&](const BrightnessParams& p) { return brightness(img, p.factor); },
          [&](const PixelNoiseParams& p) { return pixel_noise(img, p.count, mod.seed); },
          [&](const AffineParams& p) { return affine_warp(img, p); },
          [&](const WeatherParams& p) { return weather(img, p.kind, p.intensity, mod.seed); },
          [&](const BlackoutParams&) { return blackout(img); },
      },
      mod.params);
}

// ---------------------------------------------------------------------------
// Serialization

ordered_json params_to_json(const OpParams& params) {
  return std::visit(
      Overloaded{
          [](const InvertParams&) { return ordered_json::object(); },
          [](const BlackoutParams&) { return ordered_json::object(); },
          [](const FlipParams& p) { return ordered_json{{"axis", axis_name(p.axis)}}; },
          [](const BlurParams& p) { return ordered_json{{"strength", p.strength}}; },
          [](const BrightnessParams& p) { return ordered_json{{"factor", p.factor}}; },
          [](const PixelNoiseParams& p) { return ordered_json{{"count", p.count}}; },
          [](const AffineParams& p) {
            return ordered_json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}, {"f", p.f}};
          },
          [](const WeatherParams& p) {
            return ordered_json{{"kind", weather_name(p.kind)}, {"intensity", p.intensity}};
          },
      },
      params);
}

ordered_json to_json(const Modification& mod) {
  ordered_json j;
  j["op"] = op_name(mod.op());
  j["params"] = params_to_json(mod.params);
  j["seed"] = mod.seed;
  if (mod.sim.has_value()) j["sim"] = *mod.sim;
  return j;
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& pointer) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid(pointer + "/" + key, "unknown field");
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& pointer, std::optional<double> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    invalid(pointer + "/" + key, "required field is missing");
  }
  if (!it->is_number()) invalid(pointer + "/" + key, "must be a number");
  return it->get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& pointer,
                       std::optional<std::string> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    invalid(pointer + "/" + key, "required field is missing");
  }
  if (!it->is_string()) invalid(pointer + "/" + key, "must be a string");
  return it->get<std::string>();
}

}  // namespace

OpParams params_from_json(OpKind op, const json& params, const std::string& pointer) {
  const json empty = json::object();
  const json& p = params.is_null() ? empty : params;
  if (!p.is_object()) invalid(pointer, "params must be a JSON object");
  switch (op) {
    case OpKind::Invert:
      check_keys(p, {}, pointer);
      return InvertParams{};
    case OpKind::Blackout:
      check_keys(p, {}, pointer);
      return BlackoutParams{};
    case OpKind::Flip: {
      check_keys(p, {"axis"}, pointer);
      const std::string axis = get_string(p, "axis", pointer, "horizontal");
      if (axis == "horizontal") return FlipParams{FlipAxis::Horizontal};
      if (axis == "vertical") return FlipParams{FlipAxis::Vertical};
      invalid(pointer + "/axis", "must be \"horizontal\" or \"vertical\"");
    }
    case OpKind::Blur:
      check_keys(p, {"strength"}, pointer);
      return BlurParams{get_number(p, "strength", pointer)};
    case OpKind::Brightness:
      check_keys(p, {"factor"}, pointer);
      return BrightnessParams{get_number(p, "factor", pointer)};
    case OpKind::PixelNoise: {
      check_keys(p, {"count"}, pointer);
      const auto it = p.find("count");
      if (it == p.end()) invalid(pointer + "/count", "required field is missing");
      if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
        invalid(pointer + "/count", "must be a nonnegative integer");
      }
      return PixelNoiseParams{it->get<std::uint64_t>()};
    }
    case OpKind::Affine: {
      check_keys(p, {"a", "b", "c", "d", "e", "f"}, pointer);
      AffineParams a;
      a.a = get_number(p, "a", pointer, 1.0);
      a.b = get_number(p, "b", pointer, 0.0);
      a.c = get_number(p, "c", pointer, 0.0);
      a.d = get_number(p, "d", pointer, 0.0);
      a.e = get_number(p, "e", pointer, 1.0);
      a.f = get_number(p, "f", pointer, 0.0);
      return a;
    }
    case OpKind::Weather: {
      check_keys(p, {"kind", "intensity"}, pointer);
      const std::string kind = get_string(p, "kind", pointer);
      WeatherParams w;
      bool known = false;
      for (auto k : {WeatherKind::Fog, WeatherKind::Rain, WeatherKind::Snow, WeatherKind::Sun, WeatherKind::Shadow}) {
        if (weather_name(k) == kind) {
          w.kind = k;
          known = true;
        }
      }
      if (!known) invalid(pointer + "/kind", "must be one of fog, rain, snow, sun, shadow");
      w.intensity = get_number(p, "intensity", pointer);
      return w;
    }
  }
  invalid(pointer, "unknown operator");
}

Modification modification_from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) invalid(pointer, "modification must be a JSON object");
  check_keys(j, {"op", "params", "seed", "sim"}, pointer);
  const std::string name = get_string(j, "op", pointer);
  const auto op = parse_op_name(name);
  if (!op) invalid(pointer + "/op", "unknown operator \"" + name + "\"");

  Modification mod;
  const auto params = j.find("params");
  mod.params = params_from_json(*op, params == j.end() ? json() : *params, pointer + "/params");

  if (const auto seed = j.find("seed"); seed != j.end()) {
    if (!seed->is_number_unsigned()) invalid(pointer + "/seed", "must be an unsigned 64-bit integer");
    mod.seed = seed->get<std::uint64_t>();
  }
  if (const auto sim = j.find("sim"); sim != j.end()) {
    if (!sim->is_boolean()) invalid(pointer + "/sim", "must be a boolean");
    mod.sim = sim->get<bool>();
  }

  try {
    validate(mod);
  } catch (const Error& e) {
    throw Error(e.kind(), e.message(), pointer + e.pointer());
  }
  return mod;
}

std::string describe(const Modification& mod) {
  return std::string(op_name(mod.op())) + params_to_json(mod.params).dump();
}

}  // namespace vt
