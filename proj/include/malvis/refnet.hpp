#pragma once

// Tiny deterministic reference CNN: conv3x3(1->4) + ReLU + maxpool2,
// conv3x3(4->8) + ReLU + maxpool2, then a linear head. Gradients of class
// scores with respect to the last feature maps are closed-form.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "malvis/error.hpp"
#include "malvis/imagegen.hpp"
#include "malvis/random.hpp"
#include "malvis/tensor.hpp"

namespace malvis {

enum class HeadKind { gap_linear, flatten_linear };

inline std::string_view to_string(HeadKind k) { return k == HeadKind::gap_linear ? "gap-linear" : "flatten-linear"; }

inline HeadKind parse_head_kind(std::string_view s) {
  if (s == "gap-linear") return HeadKind::gap_linear;
  if (s == "flatten-linear") return HeadKind::flatten_linear;
  throw UsageError("unknown head kind '" + std::string(s) + "' (expected gap-linear or flatten-linear)");
}

struct RefNet {
  static constexpr std::size_t conv1_out = 4;
  static constexpr std::size_t features = 8;  // F
  static constexpr std::size_t kernel = 3;

  std::uint64_t seed = 0;
  HeadKind head = HeadKind::gap_linear;
  std::size_t input_size = 0;
  std::size_t classes = 0;  // M

  std::vector<float> conv1;       // [4][1][3][3]
  std::vector<float> conv1_bias;  // [4]
  std::vector<float> conv2;       // [8][4][3][3]
  std::vector<float> conv2_bias;  // [8]
  std::vector<float> head_weights;  // [M][head_inputs()]
  std::vector<float> head_bias;     // [M]

  std::size_t feature_side() const { return input_size / 2 / 2; }
  std::size_t head_inputs() const {
    return head == HeadKind::gap_linear ? features : features * feature_side() * feature_side();
  }
  float head_weight(std::size_t m, std::size_t k) const { return head_weights[m * head_inputs() + k]; }

  friend bool operator==(const RefNet&, const RefNet&) = default;
};

inline RefNet refnet_init(std::uint64_t seed, HeadKind head, std::size_t input_size, std::size_t classes) {
  if (input_size < 8) throw UsageError("refnet input size must be at least 8");
  if (classes < 2) throw UsageError("refnet needs at least 2 classes");

  RefNet net;
  net.seed = seed;
  net.head = head;
  net.input_size = input_size;
  net.classes = classes;

  Lcg64 engine(seed);
  auto draw = [&engine](std::size_t n) {
    std::vector<float> w(n);
    for (auto& v : w) v = static_cast<float>(uniform_centered(engine));
    return w;
  };
  net.conv1 = draw(RefNet::conv1_out * RefNet::kernel * RefNet::kernel);
  net.conv1_bias.assign(RefNet::conv1_out, 0.0f);
  net.conv2 = draw(RefNet::features * RefNet::conv1_out * RefNet::kernel * RefNet::kernel);
  net.conv2_bias.assign(RefNet::features, 0.0f);
  net.head_weights = draw(classes * net.head_inputs());
  net.head_bias = draw(classes);
  return net;
}

namespace refnet_detail {

// 3x3 zero-padded convolution + ReLU. `in` holds `in_ch` maps of side x side.
inline std::vector<float> conv_relu(const std::vector<float>& in, std::size_t in_ch, std::size_t side,
                                    const std::vector<float>& weights, const std::vector<float>& bias,
                                    std::size_t out_ch) {
  std::vector<float> out(out_ch * side * side);
  for (std::size_t o = 0; o < out_ch; ++o) {
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        double acc = bias[o];
        for (std::size_t i = 0; i < in_ch; ++i) {
          for (std::size_t kr = 0; kr < 3; ++kr) {
            const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r + kr) - 1;
            if (rr < 0 || rr >= static_cast<std::ptrdiff_t>(side)) continue;
            for (std::size_t kc = 0; kc < 3; ++kc) {
              const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(c + kc) - 1;
              if (cc < 0 || cc >= static_cast<std::ptrdiff_t>(side)) continue;
              acc += static_cast<double>(weights[((o * in_ch + i) * 3 + kr) * 3 + kc]) *
                     in[(i * side + static_cast<std::size_t>(rr)) * side + static_cast<std::size_t>(cc)];
            }
          }
        }
        out[(o * side + r) * side + c] = acc > 0.0 ? static_cast<float>(acc) : 0.0f;
      }
    }
  }
  return out;
}

// 2x2 max pool with stride 2; odd trailing rows/columns are dropped.
inline std::vector<float> maxpool2(const std::vector<float>& in, std::size_t ch, std::size_t side) {
  const std::size_t half = side / 2;
  std::vector<float> out(ch * half * half);
  for (std::size_t k = 0; k < ch; ++k)
    for (std::size_t r = 0; r < half; ++r)
      for (std::size_t c = 0; c < half; ++c) {
        const auto px = [&](std::size_t rr, std::size_t cc) { return in[(k * side + rr) * side + cc]; };
        out[(k * half + r) * half + c] =
            std::max({px(2 * r, 2 * c), px(2 * r, 2 * c + 1), px(2 * r + 1, 2 * c), px(2 * r + 1, 2 * c + 1)});
      }
  return out;
}

}  // namespace refnet_detail

/// Class scores computed from last-layer feature maps by the network's head.
inline std::vector<double> refnet_scores(const RefNet& net, const TensorStack& features) {
  const std::size_t side = net.feature_side();
  if (features.maps != RefNet::features || features.rows != side || features.cols != side)
    throw Error("feature stack shape does not match refnet");

  const std::size_t area = side * side;
  std::vector<double> inputs(net.head_inputs());
  if (net.head == HeadKind::gap_linear) {
    for (std::size_t f = 0; f < RefNet::features; ++f) {
      double sum = 0.0;
      for (float v : features.map(f)) sum += v;
      inputs[f] = sum / static_cast<double>(area);
    }
  } else {
    for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i] = features.values[i];
  }

  std::vector<double> scores(net.classes);
  for (std::size_t m = 0; m < net.classes; ++m) {
    double s = net.head_bias[m];
    for (std::size_t k = 0; k < inputs.size(); ++k) s += static_cast<double>(net.head_weight(m, k)) * inputs[k];
    scores[m] = s;
  }
  return scores;
}

struct ForwardResult {
  std::vector<double> scores;
  TensorStack features;
};

inline ForwardResult refnet_forward(const RefNet& net, const GrayscaleImage& img) {
  if (img.width != net.input_size || img.height != net.input_size || !img.valid())
    throw Error("refnet expects a " + std::to_string(net.input_size) + "x" + std::to_string(net.input_size) +
                " image, got " + std::to_string(img.width) + "x" + std::to_string(img.height));
  using namespace refnet_detail;

  const std::size_t side = net.input_size;
  std::vector<float> x(img.pixels.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>(img.pixels[i]) / 255.0f;

  auto h1 = maxpool2(conv_relu(x, 1, side, net.conv1, net.conv1_bias, RefNet::conv1_out), RefNet::conv1_out, side);
  const std::size_t side1 = side / 2;
  auto h2 = maxpool2(conv_relu(h1, RefNet::conv1_out, side1, net.conv2, net.conv2_bias, RefNet::features),
                     RefNet::features, side1);

  ForwardResult result;
  result.features = TensorStack(RefNet::features, net.feature_side(), net.feature_side());
  result.features.values = std::move(h2);
  result.scores = refnet_scores(net, result.features);
  return result;
}

/// d score[m] / d features, exact for the linear head.
inline TensorStack refnet_feature_gradients(const RefNet& net, const TensorStack& features, std::size_t m) {
  if (m >= net.classes)
    throw Error("class index " + std::to_string(m) + " out of range for " + std::to_string(net.classes) + " classes");
  const std::size_t side = net.feature_side();
  if (features.maps != RefNet::features || features.rows != side || features.cols != side)
    throw Error("feature stack shape does not match refnet");

  TensorStack grad(RefNet::features, side, side);
  const std::size_t area = side * side;
  for (std::size_t f = 0; f < RefNet::features; ++f)
    for (std::size_t i = 0; i < area; ++i)
      grad.values[f * area + i] = net.head == HeadKind::gap_linear
                                      ? static_cast<float>(static_cast<double>(net.head_weight(m, f)) /
                                                           static_cast<double>(area))
                                      : net.head_weight(m, f * area + i);
  return grad;
}

inline std::size_t argmax(const std::vector<double>& scores) {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace malvis
