#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "malvis/cam.hpp"
#include "malvis/error.hpp"
#include "malvis/imagegen.hpp"
#include "malvis/manifest.hpp"
#include "malvis/parallel.hpp"
#include "malvis/png_io.hpp"
#include "malvis/sampling.hpp"

namespace malvis {

/// Keep threshold applied to normalized cumulative heatmaps.
inline constexpr double default_mask_threshold = 0.3;

/// Binary keep (1) / conceal (0) matrix, row-major.
struct ClassMask {
  std::string class_label;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;

  std::size_t kept() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

  friend bool operator==(const ClassMask&, const ClassMask&) = default;
};

/// bit = 1 where either heatmap reaches `threshold` (inclusive).
inline ClassMask fuse_masks(const Heatmap& a, const Heatmap& b, double threshold = default_mask_threshold,
                            std::string class_label = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("fuse_masks: heatmap dimension mismatch");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("mask threshold must lie in [0,1]");

  ClassMask mask{std::move(class_label), a.cols(), a.rows(), std::vector<std::uint8_t>(a.rows() * a.cols())};
  for (std::size_t i = 0; i < mask.bits.size(); ++i)
    mask.bits[i] = (a.values()[i] >= threshold || b.values()[i] >= threshold) ? 1 : 0;
  return mask;
}

inline ClassMask upsample_mask(const ClassMask& mask, std::size_t target_w, std::size_t target_h) {
  return {mask.class_label, target_w, target_h,
          nearest_resample(std::span<const std::uint8_t>(mask.bits), mask.width, mask.height, target_w, target_h)};
}

/// Blacks out every pixel whose mask bit is 0.
inline GrayscaleImage apply_mask(const GrayscaleImage& img, const ClassMask& mask) {
  if (img.width != mask.width || img.height != mask.height)
    throw Error("apply_mask: image is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                " but mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height));
  GrayscaleImage out = img;
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    if (!mask.bits[i]) out.pixels[i] = 0;
  return out;
}

/// Writes `mask` as a 1-bit PNG plus a JSON sidecar (same stem, .json extension).
inline void write_mask(const ClassMask& mask, const std::filesystem::path& png_path, double threshold,
                       const std::vector<std::string>& source_models) {
  write_png_1bit(mask.width, mask.height, mask.bits, png_path);
  nlohmann::ordered_json sidecar;
  sidecar["class"] = mask.class_label;
  sidecar["threshold"] = threshold;
  sidecar["sourceModels"] = source_models;
  auto json_path = png_path;
  json_path.replace_extension(".json");
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw Error("cannot write " + json_path.string());
  out << sidecar.dump(2) << '\n';
}

/// Reads a mask PNG (any bit depth; intensity >= 128 keeps). The class label comes from
/// the JSON sidecar when present, otherwise from the file stem.
inline ClassMask read_mask(const std::filesystem::path& png_path) {
  const GrayscaleImage img = read_png(png_path);
  ClassMask mask{png_path.stem().string(), img.width, img.height, std::vector<std::uint8_t>(img.pixels.size())};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) mask.bits[i] = img.pixels[i] >= 128 ? 1 : 0;

  auto json_path = png_path;
  json_path.replace_extension(".json");
  if (std::ifstream in(json_path); in) {
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.contains("class")) mask.class_label = j["class"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(json_path.string() + ": " + e.what());
    }
  }
  return mask;
}

using ClassMasks = std::map<std::string, ClassMask>;

/// Masks every sample with the mask of its ground-truth class and writes the result
/// under `out_dir`, mirroring each sample's relative path. Masks are upsampled
/// (nearest neighbour) to each image's size. Returns the manifest of masked files in
/// input order with ids, labels and splits unchanged.
inline DatasetManifest mask_dataset(const DatasetManifest& manifest, const ClassMasks& masks,
                                    const std::filesystem::path& in_root, const std::filesystem::path& out_dir,
                                    const WarningSink& warn = warn_to_stderr) {
  manifest.validate();
  std::string missing;
  for (const auto& label : manifest.classes())
    if (!masks.contains(label)) missing += (missing.empty() ? "" : ", ") + label;
  if (!missing.empty()) throw Error("no mask for class(es): " + missing);

  const bool has_test = std::any_of(manifest.entries.begin(), manifest.entries.end(),
                                    [](const ManifestEntry& e) { return e.split == Split::test; });
  if (has_test)
    warn("test-split samples are masked with their ground-truth class mask; evaluation on this "
         "dataset leaks label information");

  DatasetManifest out = manifest;
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    const GrayscaleImage img = read_png(in_root / entry.path);
    const ClassMask& mask = masks.at(entry.class_label);
    const ClassMask fitted =
        (mask.width == img.width && mask.height == img.height) ? mask : upsample_mask(mask, img.width, img.height);

    std::filesystem::path rel(entry.path);
    rel.replace_extension(".png");
    const auto dest = out_dir / rel;
    std::filesystem::create_directories(dest.parent_path());
    write_png(apply_mask(img, fitted), dest);
    out.entries[i].path = rel.generic_string();
  });
  return out;
}

}  // namespace malvis
