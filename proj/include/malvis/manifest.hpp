#pragma once

// Dataset manifests as JSON Lines: {"id", "path", "classLabel", "split"} per line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "malvis/error.hpp"
#include "malvis/random.hpp"

namespace malvis {

enum class Split { train, val, test };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "train";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw Error("unknown split '" + std::string(s) + "'");
}

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest's base directory
  std::string class_label;
  std::optional<Split> split;  // absent until split_manifest assigns one

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  /// Throws on duplicate ids or empty paths/labels.
  void validate() const {
    std::set<std::string_view> ids;
    for (const auto& e : entries) {
      if (e.id.empty()) throw Error("manifest entry with empty id");
      if (e.path.empty()) throw Error("manifest entry '" + e.id + "' has an empty path");
      if (e.class_label.empty()) throw Error("manifest entry '" + e.id + "' has an empty classLabel");
      if (!ids.insert(e.id).second) throw Error("duplicate manifest id '" + e.id + "'");
    }
  }

  std::vector<std::string> classes() const {
    std::set<std::string> labels;
    for (const auto& e : entries) labels.insert(e.class_label);
    return {labels.begin(), labels.end()};
  }

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

inline DatasetManifest parse_manifest(std::istream& in) {
  DatasetManifest manifest;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      e.class_label = j.at("classLabel").get<std::string>();
      if (j.contains("split") && !j["split"].is_null()) e.split = parse_split(j["split"].get<std::string>());
      manifest.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error("manifest line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error("manifest line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  manifest.validate();
  return manifest;
}

inline void write_manifest(const DatasetManifest& manifest, std::ostream& out) {
  for (const auto& e : manifest.entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["path"] = e.path;
    j["classLabel"] = e.class_label;
    if (e.split) j["split"] = std::string(to_string(*e.split));
    out << j.dump() << '\n';
  }
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  return parse_manifest(in);
}

inline void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write manifest " + path.string());
  write_manifest(manifest, out);
}

using WarningSink = std::function<void(const std::string&)>;

inline void warn_to_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

struct SplitCounts {
  std::size_t train = 0, val = 0, test = 0;
};

/// Per-class split sizes: test gets floor(n * (1 - train_frac)), the rest forms the
/// training pool, and round(pool * val_frac) of the pool moves to validation.
inline SplitCounts split_counts(std::size_t n, double train_frac, double val_frac_of_train) {
  constexpr double eps = 1e-9;
  SplitCounts c;
  c.test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - train_frac) + eps));
  const std::size_t pool = n - c.test;
  c.val = static_cast<std::size_t>(std::floor(static_cast<double>(pool) * val_frac_of_train + 0.5 + eps));
  c.val = std::min(c.val, pool);
  c.train = pool - c.val;
  return c;
}

/// Stratified train/val/test assignment. Entry order is preserved; only `split` changes.
inline DatasetManifest split_manifest(const DatasetManifest& manifest, double train_frac = 0.7,
                                      double val_frac_of_train = 0.1, std::uint64_t seed = 42,
                                      const WarningSink& warn = warn_to_stderr) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw UsageError("train fraction must lie in (0,1)");
  if (!(val_frac_of_train > 0.0 && val_frac_of_train < 1.0))
    throw UsageError("validation fraction must lie in (0,1)");
  manifest.validate();

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) by_class[manifest.entries[i].class_label].push_back(i);

  DatasetManifest out = manifest;
  Lcg64 engine(seed);
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2) {
      warn("class '" + label + "' has fewer than 2 samples; assigning to train");
      for (auto i : idx) out.entries[i].split = Split::train;
      continue;
    }
    for (std::size_t k = idx.size() - 1; k > 0; --k) {
      const double u = uniform01(engine);
      const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(k + 1)), k);
      std::swap(idx[k], idx[j]);
    }
    const SplitCounts c = split_counts(idx.size(), train_frac, val_frac_of_train);
    for (std::size_t k = 0; k < idx.size(); ++k)
      out.entries[idx[k]].split = k < c.test ? Split::test : (k < c.test + c.val ? Split::val : Split::train);
  }
  return out;
}

}  // namespace malvis
