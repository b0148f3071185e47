#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "malvis/error.hpp"

namespace malvis {

/// F maps of D1 x D2 float32 values; maps are contiguous, each map row-major.
struct TensorStack {
  std::size_t maps = 0;  // F
  std::size_t rows = 0;  // D1
  std::size_t cols = 0;  // D2
  std::vector<float> values;

  TensorStack() = default;
  TensorStack(std::size_t f, std::size_t d1, std::size_t d2)
      : maps(f), rows(d1), cols(d2), values(f * d1 * d2, 0.0f) {}

  std::size_t map_size() const { return rows * cols; }

  float& at(std::size_t f, std::size_t r, std::size_t c) { return values[(f * rows + r) * cols + c]; }
  float at(std::size_t f, std::size_t r, std::size_t c) const { return values[(f * rows + r) * cols + c]; }

  std::span<const float> map(std::size_t f) const {
    return std::span<const float>(values).subspan(f * map_size(), map_size());
  }

  bool same_shape(const TensorStack& other) const {
    return maps == other.maps && rows == other.rows && cols == other.cols;
  }

  /// Throws if the value count disagrees with the shape or any value is NaN/Inf.
  void validate() const {
    if (maps == 0 || rows == 0 || cols == 0) throw Error("tensor stack has an empty dimension");
    if (values.size() != maps * rows * cols) throw Error("tensor stack value count does not match shape");
    for (float v : values)
      if (!std::isfinite(v)) throw Error("tensor stack contains non-finite values");
  }
};

/// Dense D1 x D2 real-valued map (row-major).
struct Map2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Map2D() = default;
  Map2D(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  Map2D(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != rows * cols) throw Error("map value count does not match shape");
  }

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  bool same_shape(const Map2D& o) const { return rows == o.rows && cols == o.cols; }

  friend bool operator==(const Map2D&, const Map2D&) = default;
};

}  // namespace malvis
