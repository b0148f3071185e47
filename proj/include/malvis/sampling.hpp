#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "malvis/error.hpp"

namespace malvis {

// Source coordinate of destination index `dst` under half-pixel-center
// alignment, clamped to the valid source range.
inline double half_pixel_source(std::size_t dst, std::size_t src_len, std::size_t dst_len) {
  const double scale = static_cast<double>(src_len) / static_cast<double>(dst_len);
  const double x = (static_cast<double>(dst) + 0.5) * scale - 0.5;
  return std::clamp(x, 0.0, static_cast<double>(src_len - 1));
}

/// Bilinear resampling of a row-major `src_w` x `src_h` grid to `dst_w` x `dst_h`
/// using half-pixel centers and edge clamping. Returns unrounded values.
template <typename T>
std::vector<double> bilinear_resample(std::span<const T> src, std::size_t src_w, std::size_t src_h,
                                      std::size_t dst_w, std::size_t dst_h) {
  if (dst_w == 0 || dst_h == 0) throw UsageError("target dimensions must be positive");
  if (src_w == 0 || src_h == 0 || src.size() != src_w * src_h)
    throw Error("source grid size does not match its dimensions");

  std::vector<double> out(dst_w * dst_h);
  for (std::size_t y = 0; y < dst_h; ++y) {
    const double sy = half_pixel_source(y, src_h, dst_h);
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, src_h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < dst_w; ++x) {
      const double sx = half_pixel_source(x, src_w, dst_w);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, src_w - 1);
      const double fx = sx - static_cast<double>(x0);

      const double top = static_cast<double>(src[y0 * src_w + x0]) * (1.0 - fx) +
                         static_cast<double>(src[y0 * src_w + x1]) * fx;
      const double bottom = static_cast<double>(src[y1 * src_w + x0]) * (1.0 - fx) +
                            static_cast<double>(src[y1 * src_w + x1]) * fx;
      out[y * dst_w + x] = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

/// Nearest-neighbour resampling with half-pixel centers.
template <typename T>
std::vector<T> nearest_resample(std::span<const T> src, std::size_t src_w, std::size_t src_h,
                                std::size_t dst_w, std::size_t dst_h) {
  if (dst_w == 0 || dst_h == 0) throw UsageError("target dimensions must be positive");
  if (src_w == 0 || src_h == 0 || src.size() != src_w * src_h)
    throw Error("source grid size does not match its dimensions");

  auto nearest = [](std::size_t dst, std::size_t src_len, std::size_t dst_len) {
    const double x = (static_cast<double>(dst) + 0.5) * static_cast<double>(src_len) /
                     static_cast<double>(dst_len);
    return std::min(static_cast<std::size_t>(std::floor(x)), src_len - 1);
  };

  std::vector<T> out(dst_w * dst_h);
  for (std::size_t y = 0; y < dst_h; ++y) {
    const std::size_t sy = nearest(y, src_h, dst_h);
    for (std::size_t x = 0; x < dst_w; ++x) out[y * dst_w + x] = src[sy * src_w + nearest(x, src_w, dst_w)];
  }
  return out;
}

}  // namespace malvis
