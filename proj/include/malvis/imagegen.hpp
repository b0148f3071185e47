#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "malvis/error.hpp"
#include "malvis/sampling.hpp"

namespace malvis {

/// 8-bit grayscale raster, row-major.
struct GrayscaleImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  bool valid() const { return width > 0 && height > 0 && pixels.size() == width * height; }

  friend bool operator==(const GrayscaleImage&, const GrayscaleImage&) = default;
};

/// Image width for a binary of `size` bytes (Nataraj-style size table, 1 KB = 1024 bytes).
constexpr std::size_t width_for_size(std::size_t size) {
  constexpr std::size_t kb = 1024;
  struct Bucket {
    std::size_t below;
    std::size_t width;
  };
  constexpr std::array<Bucket, 7> table{{{10 * kb, 32},
                                         {30 * kb, 64},
                                         {60 * kb, 128},
                                         {100 * kb, 256},
                                         {200 * kb, 384},
                                         {500 * kb, 512},
                                         {1024 * kb, 768}}};
  for (const auto& b : table)
    if (size < b.below) return b.width;
  return 1024;
}

/// Lays bytes out row by row; the trailing partial row is zero-padded.
inline GrayscaleImage bytes_to_image(std::span<const std::uint8_t> data,
                                     std::optional<std::size_t> width = std::nullopt) {
  if (data.empty()) throw Error("empty binary");
  if (width && *width == 0) throw UsageError("image width must be positive");

  GrayscaleImage img;
  img.width = width.value_or(width_for_size(data.size()));
  img.height = (data.size() + img.width - 1) / img.width;
  img.pixels.assign(img.width * img.height, 0);
  std::copy(data.begin(), data.end(), img.pixels.begin());
  return img;
}

inline GrayscaleImage resize_image(const GrayscaleImage& img, std::size_t target_w, std::size_t target_h) {
  if (target_w == 0 || target_h == 0) throw UsageError("target dimensions must be positive");
  if (!img.valid()) throw Error("invalid image");

  const auto values = bilinear_resample(std::span<const std::uint8_t>(img.pixels), img.width, img.height,
                                        target_w, target_h);
  GrayscaleImage out{target_w, target_h, std::vector<std::uint8_t>(values.size())};
  for (std::size_t i = 0; i < values.size(); ++i)
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(values[i]), 0L, 255L));
  return out;
}

struct EntropyProfile {
  std::size_t window = 256;
  std::size_t stride = 256;
  std::vector<double> values;  // bits, one per window
};

/// Shannon entropy (base 2) of the byte histogram of `block`.
inline double shannon_entropy(std::span<const std::uint8_t> block) {
  if (block.empty()) return 0.0;
  std::array<std::size_t, 256> counts{};
  for (auto b : block) ++counts[b];
  const double n = static_cast<double>(block.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0 || c == block.size()) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return std::clamp(h, 0.0, 8.0);
}

/// Entropy of each `window`-byte block starting every `stride` bytes.
/// Files shorter than one window yield an empty profile.
inline EntropyProfile entropy_profile(std::span<const std::uint8_t> data, std::size_t window = 256,
                                      std::size_t stride = 256) {
  if (window == 0 || stride == 0) throw UsageError("entropy window and stride must be positive");
  EntropyProfile profile{window, stride, {}};
  if (data.size() < window) return profile;

  const std::size_t count = (data.size() - window) / stride + 1;
  profile.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) profile.values.push_back(shannon_entropy(data.subspan(k * stride, window)));
  return profile;
}

}  // namespace malvis
