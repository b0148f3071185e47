// malvis: command-line front end for the malware-image explainability toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "malvis.hpp"

namespace fs = std::filesystem;
using namespace malvis;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_data = 2;

struct Size2D {
  std::size_t width = 0;
  std::size_t height = 0;
};

std::optional<Size2D> parse_size(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) {
      const auto side = std::stoul(text);
      if (side == 0) throw UsageError("size must be positive");
      return Size2D{side, side};
    }
    const auto w = std::stoul(text.substr(0, x));
    const auto h = std::stoul(text.substr(x + 1));
    if (w == 0 || h == 0) throw UsageError("size must be positive");
    return Size2D{w, h};
  } catch (const std::logic_error&) {
    throw UsageError("invalid size '" + text + "' (expected WxH or N)");
  }
}

// Filesystem-safe stem for a class label; distinct labels get distinct stems.
std::string label_stem(const std::string& label, std::set<std::string>& used) {
  std::string stem;
  for (unsigned char c : label) stem += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? static_cast<char>(c) : '_';
  if (stem.empty() || stem[0] == '.') stem = "_" + stem;
  std::string candidate = stem;
  for (int k = 1; !used.insert(candidate).second; ++k) candidate = stem + "-" + std::to_string(k);
  return candidate;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// --- model directories -------------------------------------------------------
//
// A model directory holds one cumulative heatmap per class plus cumulative.json:
// {"<label>": {"file": "<stem>.npy", "count": n}, ...}. Without the index every
// *.npy file is loaded and its stem used as the label.

ModelHeatmaps read_model_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  ModelHeatmaps model;
  const fs::path index = dir / "cumulative.json";
  if (fs::exists(index)) {
    std::ifstream in(index);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      for (const auto& [label, v] : j.items()) {
        const auto hm = read_heatmap(dir / v.at("file").get<std::string>());
        model.emplace(label, CumulativeHeatmap{label, v.value("count", std::size_t{1}), hm});
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(index.string() + ": " + e.what());
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".npy") continue;
      const std::string label = entry.path().stem().string();
      model.emplace(label, CumulativeHeatmap{label, 1, read_heatmap(entry.path())});
    }
  }
  if (model.empty()) throw Error(dir.string() + " contains no cumulative heatmaps");
  return model;
}

void write_model_dir(const ModelHeatmaps& model, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::ordered_json index;
  std::set<std::string> used;
  for (const auto& [label, cum] : model) {
    const std::string file = label_stem(label, used) + ".npy";
    write_heatmap(cum.map, dir / file);
    write_png(heatmap_to_image(cum.map), dir / (fs::path(file).stem().string() + ".png"));
    index[label] = {{"file", file}, {"count", cum.count}};
  }
  write_text(dir / "cumulative.json", index.dump(2) + "\n");
}

// Mask directories: masks.json {"<label>": "<stem>.png"} or *.png with sidecars.
ClassMasks read_mask_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  ClassMasks masks;
  const fs::path index = dir / "masks.json";
  if (fs::exists(index)) {
    std::ifstream in(index);
    try {
      const auto j = nlohmann::json::parse(in);
      for (const auto& [label, file] : j.items()) {
        auto mask = read_mask(dir / file.get<std::string>());
        mask.class_label = label;
        masks.emplace(label, std::move(mask));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(index.string() + ": " + e.what());
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".png") continue;
      auto mask = read_mask(entry.path());
      masks.emplace(mask.class_label, std::move(mask));
    }
  }
  return masks;
}

// --- commands ----------------------------------------------------------------

struct ConvertArgs {
  std::string input, output, resize;
  std::size_t width = 0;
};

void run_convert(const ConvertArgs& a) {
  const auto bytes = read_bytes(a.input);
  auto img = bytes_to_image(bytes, a.width ? std::optional<std::size_t>(a.width) : std::nullopt);
  if (const auto size = parse_size(a.resize)) img = resize_image(img, size->width, size->height);
  ensure_parent(a.output);
  write_png(img, a.output);
  std::cout << a.output << ": " << img.width << "x" << img.height << " from " << bytes.size() << " bytes\n";
}

struct EntropyArgs {
  std::string input, output;
  std::size_t window = 256, stride = 256;
};

void run_entropy(const EntropyArgs& a) {
  const auto profile = entropy_profile(read_bytes(a.input), a.window, a.stride);
  const std::string csv = to_csv(profile);
  if (a.output.empty() || a.output == "-")
    std::cout << csv;
  else
    write_text(a.output, csv);
}

struct ExplainArgs {
  std::string method = "gradcam";
  std::string features, gradients, output, png, png_size, index, out_dir;
};

void save_heatmap(const Heatmap& hm, const fs::path& npy, const std::string& png, const std::string& png_size) {
  ensure_parent(npy);
  write_heatmap(hm, npy);
  if (!png.empty()) {
    const auto size = parse_size(png_size);
    const Heatmap shown = size ? upsample_heatmap(hm, size->width, size->height) : hm;
    ensure_parent(png);
    write_png(heatmap_to_image(shown), png);
  }
}

void run_explain(const ExplainArgs& a) {
  const CamMethod method = a.method == "gradcam" ? CamMethod::gradcam : CamMethod::hirescam;
  if (!a.index.empty()) {
    if (a.out_dir.empty()) throw UsageError("--index requires --out-dir");
    const fs::path index_path(a.index);
    const auto entries = read_tensor_index(index_path);
    const fs::path base = index_path.parent_path();
    const fs::path out_dir(a.out_dir);
    fs::create_directories(out_dir);

    DatasetManifest heatmaps;
    heatmaps.entries.resize(entries.size());
    std::set<std::string> used;
    std::vector<std::string> files;
    for (const auto& e : entries) files.push_back(label_stem(e.id, used) + ".npy");
    parallel_for(entries.size(), [&](std::size_t i) {
      const auto& e = entries[i];
      const auto hm = finalize_heatmap(cam_raw(method, read_tensor(base / e.features), read_tensor(base / e.gradients)));
      write_heatmap(hm, out_dir / files[i]);
      heatmaps.entries[i] = {e.id, files[i], e.class_label.empty() ? "unlabeled" : e.class_label, std::nullopt};
    });
    write_manifest(heatmaps, out_dir / "heatmaps.jsonl");
    std::cout << "wrote " << entries.size() << " " << to_string(method) << " heatmaps to " << out_dir.string() << "\n";
    return;
  }

  if (a.features.empty() || a.gradients.empty() || a.output.empty())
    throw UsageError("explain needs FEATURES GRADIENTS -o OUTPUT, or --index with --out-dir");
  const auto hm = finalize_heatmap(cam_raw(method, read_tensor(a.features), read_tensor(a.gradients)));
  save_heatmap(hm, a.output, a.png, a.png_size);
  std::cout << a.output << ": " << to_string(method) << " " << hm.rows() << "x" << hm.cols() << "\n";
}

struct AggregateArgs {
  std::string manifest, label, output;
  std::vector<std::string> inputs;
};

void run_aggregate(const AggregateArgs& a) {
  if (!a.manifest.empty()) {
    const fs::path manifest_path(a.manifest);
    const auto manifest = read_manifest(manifest_path);
    std::map<std::string, std::vector<Heatmap>> by_class;
    for (const auto& e : manifest.entries)
      by_class[e.class_label].push_back(read_heatmap(manifest_path.parent_path() / e.path));
    ModelHeatmaps model;
    for (auto& [label, maps] : by_class) model.emplace(label, cumulative_heatmap(label, maps));
    write_model_dir(model, a.output);
    for (const auto& [label, cum] : model) std::cout << label << ": " << cum.count << " heatmaps\n";
    return;
  }
  if (a.label.empty() || a.inputs.empty()) throw UsageError("aggregate needs --manifest, or --class with heatmap files");
  std::vector<Heatmap> maps;
  for (const auto& p : a.inputs) maps.push_back(read_heatmap(p));
  const auto cum = cumulative_heatmap(a.label, maps);
  ensure_parent(a.output);
  write_heatmap(cum.map, a.output);
  std::cout << a.label << ": " << cum.count << " heatmaps\n";
}

struct SsimArgs {
  std::vector<std::string> pair;
  std::string self, output;
  std::size_t window = 0;
};

void run_ssim(const SsimArgs& a) {
  if (a.pair.empty() == a.self.empty()) throw UsageError("ssim needs exactly one of --pair or --self");
  std::string json;
  if (!a.pair.empty()) {
    const auto model_a = read_model_dir(a.pair[0]);
    const auto model_b = read_model_dir(a.pair[1]);
    SsimReport report;
    if (a.window == 0) {
      report = pairwise_cumulative_ssim(model_a, model_b);
    } else {
      report = pairwise_cumulative_ssim(model_a, model_b);  // validates class sets
      report.sum = 0.0;
      for (auto& [label, v] : report.per_class) {
        v = ssim_sliding(model_a.at(label).map, model_b.at(label).map, a.window);
        report.sum += v;
      }
      report.mean = report.sum / static_cast<double>(report.per_class.size());
    }
    json = to_json(report);
  } else {
    const auto model = read_model_dir(a.self);
    json = "{\n  \"classes\": " + std::to_string(model.size()) + ",\n  \"selfSsim\": " + fixed(model_self_ssim(model), 6) +
           "\n}\n";
  }
  if (a.output.empty() || a.output == "-")
    std::cout << json;
  else
    write_text(a.output, json);
}

struct FuseArgs {
  std::string first, second, output, label, size, sources;
  double threshold = default_mask_threshold;
};

void run_fuse(const FuseArgs& a) {
  std::vector<std::string> sources;
  if (!a.sources.empty()) {
    std::stringstream ss(a.sources);
    for (std::string s; std::getline(ss, s, ',');) sources.push_back(s);
  } else {
    sources = {fs::path(a.first).filename().string(), fs::path(a.second).filename().string()};
  }
  const auto size = parse_size(a.size);
  auto finish = [&](ClassMask mask) { return size ? upsample_mask(mask, size->width, size->height) : mask; };

  if (fs::is_directory(a.first) && fs::is_directory(a.second)) {
    const auto model_a = read_model_dir(a.first);
    const auto model_b = read_model_dir(a.second);
    pairwise_cumulative_ssim(model_a, model_b);  // same class sets and shapes
    const fs::path out_dir(a.output);
    fs::create_directories(out_dir);
    nlohmann::ordered_json index;
    std::set<std::string> used;
    for (const auto& [label, cum] : model_a) {
      const auto mask = finish(fuse_masks(cum.map, model_b.at(label).map, a.threshold, label));
      const std::string file = label_stem(label, used) + ".png";
      write_mask(mask, out_dir / file, a.threshold, sources);
      index[label] = file;
      std::cout << label << ": kept " << mask.kept() << "/" << mask.bits.size() << " pixels\n";
    }
    write_text(out_dir / "masks.json", index.dump(2) + "\n");
    return;
  }

  const auto hm_a = read_heatmap(a.first);
  const auto hm_b = read_heatmap(a.second);
  const std::string label = a.label.empty() ? fs::path(a.output).stem().string() : a.label;
  const auto mask = finish(fuse_masks(hm_a, hm_b, a.threshold, label));
  ensure_parent(a.output);
  write_mask(mask, a.output, a.threshold, sources);
  std::cout << a.output << ": threshold " << a.threshold << ", kept " << mask.kept() << "/" << mask.bits.size()
            << " pixels\n";
}

struct MaskDatasetArgs {
  std::string manifest, masks, output, root;
};

void run_mask_dataset(const MaskDatasetArgs& a) {
  const fs::path manifest_path(a.manifest);
  const auto manifest = read_manifest(manifest_path);
  const fs::path root = a.root.empty() ? manifest_path.parent_path() : fs::path(a.root);
  const auto masks = read_mask_dir(a.masks);
  const fs::path out_dir(a.output);
  fs::create_directories(out_dir);
  const auto masked = mask_dataset(manifest, masks, root, out_dir);
  write_manifest(masked, out_dir / "manifest.jsonl");
  std::cout << "masked " << masked.entries.size() << " samples into " << out_dir.string() << "\n";
}

struct EvalArgs {
  std::string labels, preds, output, confusion;
};

void run_eval(const EvalArgs& a) {
  const auto truth = read_labels_csv(a.labels);
  const auto preds = read_labels_csv(a.preds);

  std::map<std::string, std::string> predicted;
  for (const auto& p : preds)
    if (!predicted.emplace(p.id, p.label).second) throw Error("duplicate id '" + p.id + "' in " + a.preds);
  std::set<std::string> names;
  std::set<std::string> seen;
  for (const auto& t : truth) {
    if (!seen.insert(t.id).second) throw Error("duplicate id '" + t.id + "' in " + a.labels);
    const auto it = predicted.find(t.id);
    if (it == predicted.end()) throw Error("no prediction for id '" + t.id + "'");
    names.insert(t.label);
    names.insert(it->second);
  }
  if (predicted.size() != truth.size()) throw Error("predictions contain ids missing from the label file");

  const std::vector<std::string> classes(names.begin(), names.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;
  std::vector<std::size_t> y, p;
  for (const auto& t : truth) {
    y.push_back(index.at(t.label));
    p.push_back(index.at(predicted.at(t.id)));
  }
  const auto cm = confusion_matrix(y, p, classes.size());
  const std::string json = to_json(classification_metrics(cm), classes);
  if (a.output.empty() || a.output == "-")
    std::cout << json;
  else
    write_text(a.output, json);
  if (!a.confusion.empty()) write_text(a.confusion, to_csv(cm, classes));
}

struct SplitArgs {
  std::string manifest, output;
  double train = 0.7, val = 0.1;
  std::uint64_t seed = 42;
};

void run_split(const SplitArgs& a) {
  std::cout << "seed: " << a.seed << "\n";
  const auto out = split_manifest(read_manifest(a.manifest), a.train, a.val, a.seed);
  ensure_parent(a.output);
  write_manifest(out, fs::path(a.output));
  std::map<std::string, SplitCounts> counts;
  for (const auto& e : out.entries) {
    auto& c = counts[e.class_label];
    (e.split == Split::test ? c.test : e.split == Split::val ? c.val : c.train)++;
  }
  for (const auto& [label, c] : counts)
    std::cout << label << ": " << c.train << " train / " << c.val << " val / " << c.test << " test\n";
}

struct ExportArgs {
  std::string manifest, root, output, weights, head = "gap-linear", target = "predicted";
  std::uint64_t seed = 42;
  std::size_t input_size = 28;
};

// Runs refnet over every manifest image and writes features/gradients in the
// same layout an external exporter produces (NPY pairs plus index.json).
void run_export(const ExportArgs& a) {
  const fs::path manifest_path(a.manifest);
  const auto manifest = read_manifest(manifest_path);
  const fs::path root = a.root.empty() ? manifest_path.parent_path() : fs::path(a.root);
  const auto classes = manifest.classes();
  const fs::path out_dir(a.output);
  fs::create_directories(out_dir);

  RefNet net;
  if (!a.weights.empty()) {
    net = read_refnet(a.weights);
  } else {
    std::cout << "seed: " << a.seed << "\n";
    if (classes.size() < 2) throw Error("refnet export needs at least 2 classes in the manifest");
    net = refnet_init(a.seed, parse_head_kind(a.head), a.input_size, classes.size());
    write_refnet(net, out_dir / "refnet");
  }
  if (net.classes < classes.size())
    throw Error("refnet has " + std::to_string(net.classes) + " classes but the manifest has " +
                std::to_string(classes.size()));
  const bool use_true_label = a.target == "true-label";

  std::vector<TensorIndexEntry> index(manifest.entries.size());
  std::set<std::string> used;
  std::vector<std::string> stems;
  for (const auto& e : manifest.entries) stems.push_back(label_stem(e.id, used));
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    const auto img = resize_image(read_png(root / e.path), net.input_size, net.input_size);
    const auto fwd = refnet_forward(net, img);
    const std::size_t truth =
        static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), e.class_label) - classes.begin());
    const std::size_t target = use_true_label ? truth : argmax(fwd.scores);
    write_tensor(fwd.features, out_dir / (stems[i] + ".features.npy"));
    write_tensor(refnet_feature_gradients(net, fwd.features, target), out_dir / (stems[i] + ".gradients.npy"));
    index[i] = {e.id, stems[i] + ".features.npy", stems[i] + ".gradients.npy", e.class_label,
                static_cast<long>(target)};
  });
  write_text(out_dir / "index.json", tensor_index_json(index));
  std::cout << "exported " << index.size() << " samples to " << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"malvis: malware image generation, CAM explanations, SSIM comparison and saliency masking"};
  app.require_subcommand(1);

  ConvertArgs convert;
  auto* c_convert = app.add_subcommand("convert", "Convert a binary file into a grayscale PNG");
  c_convert->add_option("input", convert.input, "Binary file")->required()->check(CLI::ExistingFile);
  c_convert->add_option("-o,--output", convert.output, "Output PNG")->required();
  c_convert->add_option("--width", convert.width, "Image width (default: size table)")->check(CLI::PositiveNumber);
  c_convert->add_option("--resize", convert.resize, "Resize to WxH (bilinear)");

  EntropyArgs entropy;
  auto* c_entropy = app.add_subcommand("entropy", "Sliding-window Shannon entropy profile as CSV");
  c_entropy->add_option("input", entropy.input, "Binary file")->required()->check(CLI::ExistingFile);
  c_entropy->add_option("-o,--output", entropy.output, "Output CSV (default: stdout)");
  c_entropy->add_option("--window", entropy.window, "Window in bytes")->capture_default_str()->check(CLI::PositiveNumber);
  c_entropy->add_option("--stride", entropy.stride, "Stride in bytes")->capture_default_str()->check(CLI::PositiveNumber);

  ExplainArgs explain;
  auto* c_explain = app.add_subcommand("explain", "Compute heatmaps from feature and gradient tensors");
  c_explain->add_option("--method", explain.method, "CAM method")
      ->capture_default_str()
      ->check(CLI::IsMember({"gradcam", "hirescam"}));
  c_explain->add_option("features", explain.features, "Feature tensor (NPY, F x D1 x D2)");
  c_explain->add_option("gradients", explain.gradients, "Gradient tensor (NPY, F x D1 x D2)");
  c_explain->add_option("-o,--output", explain.output, "Output heatmap tensor (NPY)");
  c_explain->add_option("--png", explain.png, "Also write the heatmap as a PNG");
  c_explain->add_option("--png-size", explain.png_size, "Upsample the PNG to WxH");
  c_explain->add_option("--index", explain.index, "Batch mode: tensor index JSON")->check(CLI::ExistingFile);
  c_explain->add_option("--out-dir", explain.out_dir, "Batch mode output directory");

  AggregateArgs aggregate;
  auto* c_aggregate = app.add_subcommand("aggregate", "Average heatmaps into per-class cumulative heatmaps");
  c_aggregate->add_option("--manifest", aggregate.manifest, "Heatmap manifest (JSON Lines)")->check(CLI::ExistingFile);
  c_aggregate->add_option("--class", aggregate.label, "Class label for positional heatmaps");
  c_aggregate->add_option("-o,--output", aggregate.output, "Output model directory (or NPY with --class)")->required();
  c_aggregate->add_option("heatmaps", aggregate.inputs, "Heatmap tensors for --class");

  SsimArgs ssim_args;
  auto* c_ssim = app.add_subcommand("ssim", "Compare cumulative heatmaps with SSIM");
  c_ssim->add_option("--pair", ssim_args.pair, "Two model directories")->expected(2);
  c_ssim->add_option("--self", ssim_args.self, "One model directory");
  c_ssim->add_option("--window", ssim_args.window, "Sliding window size (default: single whole-map window)");
  c_ssim->add_option("-o,--output", ssim_args.output, "Output JSON (default: stdout)");

  FuseArgs fuse;
  auto* c_fuse = app.add_subcommand("fuse-mask", "Threshold two heatmaps and OR them into a binary mask");
  c_fuse->add_option("first", fuse.first, "Heatmap NPY or model directory")->required();
  c_fuse->add_option("second", fuse.second, "Heatmap NPY or model directory")->required();
  c_fuse->add_option("-o,--output", fuse.output, "Output mask PNG (or directory for model directories)")->required();
  c_fuse->add_option("--threshold", fuse.threshold, "Keep threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_fuse->add_option("--class", fuse.label, "Class label recorded in the sidecar");
  c_fuse->add_option("--size", fuse.size, "Upsample the mask to WxH (nearest neighbour)");
  c_fuse->add_option("--source-models", fuse.sources, "Comma-separated model names for the sidecar");

  MaskDatasetArgs mask_ds;
  auto* c_mask = app.add_subcommand("mask-dataset", "Apply per-class masks to every image of a manifest");
  c_mask->add_option("--manifest", mask_ds.manifest, "Dataset manifest (JSON Lines)")->required()->check(CLI::ExistingFile);
  c_mask->add_option("--masks", mask_ds.masks, "Mask directory")->required();
  c_mask->add_option("-o,--output", mask_ds.output, "Output directory")->required();
  c_mask->add_option("--root", mask_ds.root, "Base directory for manifest paths (default: manifest directory)");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Accuracy and macro precision/recall/F1 from id,label CSVs");
  c_eval->add_option("labels", eval.labels, "Ground-truth CSV (id,label)")->required()->check(CLI::ExistingFile);
  c_eval->add_option("preds", eval.preds, "Prediction CSV (id,label)")->required()->check(CLI::ExistingFile);
  c_eval->add_option("-o,--output", eval.output, "Output JSON (default: stdout)");
  c_eval->add_option("--confusion", eval.confusion, "Also write the confusion matrix CSV");

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Stratified train/val/test split of a manifest");
  c_split->add_option("--manifest", split.manifest, "Input manifest (JSON Lines)")->required()->check(CLI::ExistingFile);
  c_split->add_option("-o,--output", split.output, "Output manifest")->required();
  c_split->add_option("--train", split.train, "Train fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_split->add_option("--val", split.val, "Validation fraction of train")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_split->add_option("--seed", split.seed, "Shuffle seed")->capture_default_str();

  ExportArgs exp;
  auto* c_export = app.add_subcommand("export-refnet", "Export refnet features and gradients for a manifest");
  c_export->add_option("--manifest", exp.manifest, "Image manifest (JSON Lines)")->required()->check(CLI::ExistingFile);
  c_export->add_option("--root", exp.root, "Base directory for manifest paths (default: manifest directory)");
  c_export->add_option("-o,--output", exp.output, "Output directory")->required();
  c_export->add_option("--weights", exp.weights, "Load refnet weights from this directory");
  c_export->add_option("--seed", exp.seed, "Weight seed")->capture_default_str();
  c_export->add_option("--head", exp.head, "Head kind")
      ->capture_default_str()
      ->check(CLI::IsMember({"gap-linear", "flatten-linear"}));
  c_export->add_option("--input-size", exp.input_size, "Network input side")->capture_default_str()->check(CLI::Range(8, 4096));
  c_export->add_option("--target", exp.target, "Gradient target class")
      ->capture_default_str()
      ->check(CLI::IsMember({"predicted", "true-label"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* shown = &app;
    for (const auto* sub : app.get_subcommands()) shown = sub;
    std::cerr << shown->help();
    return exit_usage;
  }

  try {
    if (*c_convert) run_convert(convert);
    else if (*c_entropy) run_entropy(entropy);
    else if (*c_explain) run_explain(explain);
    else if (*c_aggregate) run_aggregate(aggregate);
    else if (*c_ssim) run_ssim(ssim_args);
    else if (*c_fuse) run_fuse(fuse);
    else if (*c_mask) run_mask_dataset(mask_ds);
    else if (*c_eval) run_eval(eval);
    else if (*c_split) run_split(split);
    else if (*c_export) run_export(exp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  return 0;
}
