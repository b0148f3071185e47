#pragma once

// Independent reference evaluators used only by tests. They deliberately avoid the
// library's code paths: plain loops over index formulas, no shared helpers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Bilinear interpolation at half-pixel centers, written from the textbook
// definition: map the destination center into source space, clamp, blend the
// four neighbours.
inline double bilinear_at(const std::vector<double>& src, int sw, int sh, int dw, int dh, int x, int y) {
  auto clampd = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };
  const double sx = clampd((x + 0.5) * sw / dw - 0.5, 0.0, sw - 1.0);
  const double sy = clampd((y + 0.5) * sh / dh - 0.5, 0.0, sh - 1.0);
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = x0 + 1 < sw ? x0 + 1 : sw - 1;
  const int y1 = y0 + 1 < sh ? y0 + 1 : sh - 1;
  const double wx = sx - x0;
  const double wy = sy - y0;
  auto px = [&](int xx, int yy) { return src[static_cast<std::size_t>(yy * sw + xx)]; };
  return (1 - wx) * (1 - wy) * px(x0, y0) + wx * (1 - wy) * px(x1, y0) + (1 - wx) * wy * px(x0, y1) +
         wx * wy * px(x1, y1);
}

inline std::vector<double> bilinear(const std::vector<double>& src, int sw, int sh, int dw, int dh) {
  std::vector<double> out;
  for (int y = 0; y < dh; ++y)
    for (int x = 0; x < dw; ++x) out.push_back(bilinear_at(src, sw, sh, dw, dh, x, y));
  return out;
}

// Nearest neighbour at half-pixel centers: the source pixel containing the
// destination center.
inline std::vector<int> nearest(const std::vector<int>& src, int sw, int sh, int dw, int dh) {
  std::vector<int> out;
  for (int y = 0; y < dh; ++y)
    for (int x = 0; x < dw; ++x) {
      int sx = static_cast<int>((x + 0.5) * sw / dw);
      int sy = static_cast<int>((y + 0.5) * sh / dh);
      if (sx >= sw) sx = sw - 1;
      if (sy >= sh) sy = sh - 1;
      out.push_back(src[static_cast<std::size_t>(sy * sw + sx)]);
    }
  return out;
}

// Stacks stored as [f][d1][d2] nested vectors.
using Stack = std::vector<std::vector<std::vector<double>>>;

inline std::vector<std::vector<double>> gradcam(const Stack& a, const Stack& g) {
  const std::size_t F = a.size(), D1 = a[0].size(), D2 = a[0][0].size();
  std::vector<std::vector<double>> out(D1, std::vector<double>(D2, 0.0));
  for (std::size_t f = 0; f < F; ++f) {
    double alpha = 0.0;
    for (std::size_t i = 0; i < D1; ++i)
      for (std::size_t j = 0; j < D2; ++j) alpha += g[f][i][j];
    alpha /= static_cast<double>(D1 * D2);
    for (std::size_t i = 0; i < D1; ++i)
      for (std::size_t j = 0; j < D2; ++j) out[i][j] += alpha * a[f][i][j];
  }
  return out;
}

inline std::vector<std::vector<double>> hirescam(const Stack& a, const Stack& g) {
  const std::size_t F = a.size(), D1 = a[0].size(), D2 = a[0][0].size();
  std::vector<std::vector<double>> out(D1, std::vector<double>(D2, 0.0));
  for (std::size_t i = 0; i < D1; ++i)
    for (std::size_t j = 0; j < D2; ++j)
      for (std::size_t f = 0; f < F; ++f) out[i][j] += g[f][i][j] * a[f][i][j];
  return out;
}

// Central difference of `fn` around x along one coordinate, dividing by the step
// actually realised in float arithmetic.
inline double central_difference(const std::function<double(float)>& fn, float x, float eps) {
  const float hi = x + eps;
  const float lo = x - eps;
  return (fn(hi) - fn(lo)) / (static_cast<double>(hi) - static_cast<double>(lo));
}

}  // namespace oracle
