#pragma once

// File-level interchange shared with external tensor exporters: heatmaps as
// (1, D1, D2) NPY tensors, and a JSON index mapping sample ids to tensor files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "malvis/cam.hpp"
#include "malvis/imagegen.hpp"
#include "malvis/npy.hpp"

namespace malvis {

inline TensorStack heatmap_to_tensor(const Heatmap& hm) {
  TensorStack t(1, hm.rows(), hm.cols());
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<float>(hm.values()[i]);
  return t;
}

inline Heatmap tensor_to_heatmap(const TensorStack& t) {
  if (t.maps != 1) throw Error("heatmap tensor must have exactly one map, got " + std::to_string(t.maps));
  t.validate();
  return Heatmap(Map2D(t.rows, t.cols, std::vector<double>(t.values.begin(), t.values.end())));
}

inline void write_heatmap(const Heatmap& hm, const std::filesystem::path& path) {
  write_tensor(heatmap_to_tensor(hm), path);
}

inline Heatmap read_heatmap(const std::filesystem::path& path) {
  try {
    return tensor_to_heatmap(read_tensor(path));
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw Error(path.string() + ": " + what);
  }
}

/// Scales [0,1] to 0..255 for display.
inline GrayscaleImage heatmap_to_image(const Heatmap& hm) {
  GrayscaleImage img{hm.cols(), hm.rows(), std::vector<std::uint8_t>(hm.rows() * hm.cols())};
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(hm.values()[i] * 255.0));
  return img;
}

struct TensorIndexEntry {
  std::string id;
  std::string features;   // path relative to the index file
  std::string gradients;  // path relative to the index file
  std::string class_label;  // ground truth, may be empty
  std::optional<long> target_class;  // class whose score was differentiated, if recorded
};

/// Index format: {"<id>": {"features": path, "gradients": path, "classLabel": label,
/// "targetClass": m}, ...}; classLabel and targetClass are optional.
inline std::vector<TensorIndexEntry> parse_tensor_index(std::istream& in, const std::string& source = "index") {
  std::vector<TensorIndexEntry> entries;
  try {
    const auto j = nlohmann::ordered_json::parse(in);
    if (!j.is_object()) throw Error(source + ": index must be a JSON object keyed by sample id");
    for (const auto& [id, v] : j.items()) {
      TensorIndexEntry e;
      e.id = id;
      e.features = v.at("features").get<std::string>();
      e.gradients = v.at("gradients").get<std::string>();
      if (v.contains("classLabel")) e.class_label = v["classLabel"].get<std::string>();
      if (v.contains("targetClass")) e.target_class = v["targetClass"].get<long>();
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(source + ": " + e.what());
  }
  return entries;
}

inline std::vector<TensorIndexEntry> read_tensor_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_tensor_index(in, path.string());
}

inline std::string tensor_index_json(const std::vector<TensorIndexEntry>& entries) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : entries) {
    nlohmann::ordered_json v;
    v["features"] = e.features;
    v["gradients"] = e.gradients;
    if (!e.class_label.empty()) v["classLabel"] = e.class_label;
    if (e.target_class) v["targetClass"] = *e.target_class;
    j[e.id] = v;
  }
  return j.dump(2) + "\n";
}

}  // namespace malvis
