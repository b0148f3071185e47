#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "malvis/cam.hpp"
#include "malvis/error.hpp"
#include "malvis/format.hpp"

namespace malvis {

struct CumulativeHeatmap {
  std::string class_label;
  std::size_t count = 0;
  Heatmap map;
};

/// Per-class cumulative heatmaps of one model, keyed by class label.
using ModelHeatmaps = std::map<std::string, CumulativeHeatmap>;

/// Element-wise mean of `heatmaps`, re-finalized so the result is min-max normalized.
/// Each pixel's values are summed in sorted order, so input order cannot change the result.
inline CumulativeHeatmap cumulative_heatmap(std::string class_label, std::span<const Heatmap> heatmaps) {
  if (heatmaps.empty()) throw Error("cumulative heatmap for '" + class_label + "' needs at least one heatmap");
  const std::size_t rows = heatmaps.front().rows();
  const std::size_t cols = heatmaps.front().cols();
  for (const auto& h : heatmaps)
    if (h.rows() != rows || h.cols() != cols)
      throw Error("cumulative heatmap for '" + class_label + "': mixed heatmap dimensions");

  Map2D mean(rows, cols);
  std::vector<double> column(heatmaps.size());
  for (std::size_t i = 0; i < rows * cols; ++i) {
    for (std::size_t k = 0; k < heatmaps.size(); ++k) column[k] = heatmaps[k].values()[i];
    std::sort(column.begin(), column.end());
    mean.values[i] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(heatmaps.size());
  }
  return {std::move(class_label), heatmaps.size(), finalize_heatmap(mean)};
}

inline constexpr double ssim_dynamic_range = 1.0;
inline constexpr double ssim_c1 = (0.01 * ssim_dynamic_range) * (0.01 * ssim_dynamic_range);
inline constexpr double ssim_c2 = (0.03 * ssim_dynamic_range) * (0.03 * ssim_dynamic_range);

namespace ssim_detail {

// SSIM over the sub-window [r0, r0+h) x [c0, c0+w), population statistics.
inline double window_ssim(const Heatmap& a, const Heatmap& b, std::size_t r0, std::size_t c0, std::size_t h,
                          std::size_t w) {
  const double n = static_cast<double>(h * w);
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t r = r0; r < r0 + h; ++r)
    for (std::size_t c = c0; c < c0 + w; ++c) {
      sum_a += a.at(r, c);
      sum_b += b.at(r, c);
    }
  const double mu_a = sum_a / n;
  const double mu_b = sum_b / n;

  double var_a = 0.0, var_b = 0.0, cov = 0.0;
  for (std::size_t r = r0; r < r0 + h; ++r)
    for (std::size_t c = c0; c < c0 + w; ++c) {
      const double da = a.at(r, c) - mu_a;
      const double db = b.at(r, c) - mu_b;
      var_a += da * da;
      var_b += db * db;
      cov += da * db;
    }
  var_a /= n;
  var_b /= n;
  cov /= n;

  const double num = (2.0 * (mu_a * mu_b) + ssim_c1) * (2.0 * cov + ssim_c2);
  const double den = (mu_a * mu_a + mu_b * mu_b + ssim_c1) * (var_a + var_b + ssim_c2);
  return num / den;
}

inline void check_dims(const Heatmap& a, const Heatmap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("ssim: dimension mismatch (" + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
}

}  // namespace ssim_detail

/// Single-window SSIM spanning the whole map (L = 1, C1 = 1e-4, C2 = 9e-4).
inline double ssim(const Heatmap& a, const Heatmap& b) {
  ssim_detail::check_dims(a, b);
  return ssim_detail::window_ssim(a, b, 0, 0, a.rows(), a.cols());
}

/// Mean SSIM over all `window` x `window` sub-windows (stride 1). Maps must be at least that large.
inline double ssim_sliding(const Heatmap& a, const Heatmap& b, std::size_t window = 11) {
  ssim_detail::check_dims(a, b);
  if (window == 0) throw UsageError("ssim window must be positive");
  if (a.rows() < window || a.cols() < window)
    throw Error("ssim: map smaller than the " + std::to_string(window) + "x" + std::to_string(window) + " window");
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r + window <= a.rows(); ++r)
    for (std::size_t c = 0; c + window <= a.cols(); ++c, ++n) total += ssim_detail::window_ssim(a, b, r, c, window, window);
  return total / static_cast<double>(n);
}

struct SsimReport {
  std::map<std::string, double> per_class;
  double mean = 0.0;
  double sum = 0.0;
};

inline SsimReport pairwise_cumulative_ssim(const ModelHeatmaps& model_a, const ModelHeatmaps& model_b) {
  std::vector<std::string> only_a, only_b;
  for (const auto& [label, _] : model_a)
    if (!model_b.contains(label)) only_a.push_back(label);
  for (const auto& [label, _] : model_b)
    if (!model_a.contains(label)) only_b.push_back(label);
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "class-set mismatch:";
    for (const auto& l : only_a) msg += " '" + l + "' only in first model;";
    for (const auto& l : only_b) msg += " '" + l + "' only in second model;";
    msg.pop_back();
    throw Error(msg);
  }
  if (model_a.empty()) throw Error("pairwise ssim needs at least one class");

  SsimReport report;
  for (const auto& [label, cum] : model_a) {
    const double v = ssim(cum.map, model_b.at(label).map);
    report.per_class.emplace(label, v);
    report.sum += v;
  }
  report.mean = report.sum / static_cast<double>(report.per_class.size());
  return report;
}

/// Mean SSIM over all unordered pairs of one model's class heatmaps; lower means
/// more class-distinctive attention.
inline double model_self_ssim(const ModelHeatmaps& model) {
  if (model.size() < 2) throw Error("self ssim needs at least 2 classes, got " + std::to_string(model.size()));
  std::vector<double> values;
  for (auto i = model.begin(); i != model.end(); ++i)
    for (auto j = std::next(i); j != model.end(); ++j) values.push_back(ssim(i->second.map, j->second.map));
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// {"classes": {label: value, ...}, "mean": v, "sum": v} with 6 decimals.
inline std::string to_json(const SsimReport& report) {
  std::string out = "{\n  \"classes\": {";
  bool first = true;
  for (const auto& [label, v] : report.per_class) {
    out += first ? "\n" : ",\n";
    out += "    " + nlohmann::json(label).dump() + ": " + fixed(v, 6);
    first = false;
  }
  out += report.per_class.empty() ? "},\n" : "\n  },\n";
  out += "  \"mean\": " + fixed(report.mean, 6) + ",\n";
  out += "  \"sum\": " + fixed(report.sum, 6) + "\n}\n";
  return out;
}

}  // namespace malvis
