#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "malvis/error.hpp"
#include "malvis/sampling.hpp"
#include "malvis/tensor.hpp"

namespace malvis {

/// Nonnegative attention map with values in [0,1]. Maps produced by
/// finalize_heatmap are also min-max normalized (peak exactly 1 unless all zero).
class Heatmap {
 public:
  Heatmap() = default;

  /// Wraps `map`, throwing if any value lies outside [0,1] or is not finite.
  explicit Heatmap(Map2D map) : map_(std::move(map)) {
    if (map_.rows == 0 || map_.cols == 0) throw Error("heatmap has an empty dimension");
    for (double v : map_.values)
      if (!(v >= 0.0 && v <= 1.0)) throw Error("heatmap value outside [0,1]");
  }

  std::size_t rows() const { return map_.rows; }
  std::size_t cols() const { return map_.cols; }
  double at(std::size_t r, std::size_t c) const { return map_.at(r, c); }
  std::span<const double> values() const { return map_.values; }
  const Map2D& map() const { return map_; }

  bool all_zero() const {
    return std::all_of(map_.values.begin(), map_.values.end(), [](double v) { return v == 0.0; });
  }
  double peak() const { return *std::max_element(map_.values.begin(), map_.values.end()); }

  friend bool operator==(const Heatmap&, const Heatmap&) = default;

 private:
  Map2D map_;
};

enum class CamMethod { gradcam, hirescam };

inline std::string_view to_string(CamMethod m) { return m == CamMethod::gradcam ? "gradcam" : "hirescam"; }

namespace detail {

inline void check_stacks(const TensorStack& features, const TensorStack& gradients) {
  if (!features.same_shape(gradients)) throw Error("stack shape mismatch");
  features.validate();
  gradients.validate();
}

}  // namespace detail

/// GradCAM before rectification: each feature map weighted by the spatial
/// mean of its gradient, summed over maps.
inline Map2D gradcam_raw(const TensorStack& features, const TensorStack& gradients) {
  detail::check_stacks(features, gradients);
  const std::size_t n = features.map_size();

  std::vector<double> acc(n, 0.0);
  for (std::size_t f = 0; f < features.maps; ++f) {
    const auto grad = gradients.map(f);
    double grad_sum = 0.0;
    for (float g : grad) grad_sum += g;
    const double alpha = grad_sum / static_cast<double>(n);

    const auto a = features.map(f);
    for (std::size_t i = 0; i < n; ++i) acc[i] += alpha * static_cast<double>(a[i]);
  }
  return Map2D(features.rows, features.cols, std::move(acc));
}

/// HiResCAM before rectification: element-wise gradient * activation, summed over maps.
inline Map2D hirescam_raw(const TensorStack& features, const TensorStack& gradients) {
  detail::check_stacks(features, gradients);
  const std::size_t n = features.map_size();

  std::vector<double> acc(n, 0.0);
  for (std::size_t f = 0; f < features.maps; ++f) {
    const auto grad = gradients.map(f);
    const auto a = features.map(f);
    for (std::size_t i = 0; i < n; ++i) acc[i] += static_cast<double>(grad[i]) * static_cast<double>(a[i]);
  }
  return Map2D(features.rows, features.cols, std::move(acc));
}

inline Map2D cam_raw(CamMethod method, const TensorStack& features, const TensorStack& gradients) {
  return method == CamMethod::gradcam ? gradcam_raw(features, gradients) : hirescam_raw(features, gradients);
}

/// ReLU followed by per-map min-max normalization. A constant map becomes all zeros.
inline Heatmap finalize_heatmap(const Map2D& raw) {
  if (raw.rows == 0 || raw.cols == 0 || raw.values.size() != raw.rows * raw.cols)
    throw Error("raw map has an invalid shape");
  for (double v : raw.values)
    if (std::isnan(v)) throw Error("raw map contains NaN");
    else if (std::isinf(v)) throw Error("raw map contains Inf");

  Map2D out(raw.rows, raw.cols);
  std::transform(raw.values.begin(), raw.values.end(), out.values.begin(),
                 [](double v) { return std::max(v, 0.0); });

  const auto [lo_it, hi_it] = std::minmax_element(out.values.begin(), out.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
  } else {
    const double range = hi - lo;
    for (double& v : out.values) v = v == hi ? 1.0 : std::clamp((v - lo) / range, 0.0, 1.0);
  }
  return Heatmap(std::move(out));
}

/// Bilinear (half-pixel centers) resize of a heatmap, clamped to [0,1].
inline Heatmap upsample_heatmap(const Heatmap& hm, std::size_t target_w, std::size_t target_h) {
  if (target_w == 0 || target_h == 0) throw UsageError("target dimensions must be positive");
  auto values = bilinear_resample(hm.values(), hm.cols(), hm.rows(), target_w, target_h);
  for (double& v : values) v = std::clamp(v, 0.0, 1.0);
  return Heatmap(Map2D(target_h, target_w, std::move(values)));
}

}  // namespace malvis
