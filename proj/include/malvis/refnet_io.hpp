#pragma once

// refnet weights on disk: one NPY tensor per parameter plus refnet.json.

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "malvis/npy.hpp"
#include "malvis/refnet.hpp"

namespace malvis {

namespace refnet_io_detail {

struct Param {
  const char* name;
  std::vector<float> RefNet::*member;
  std::size_t maps, rows, cols;
};

inline std::vector<Param> params(const RefNet& net) {
  return {{"conv1", &RefNet::conv1, RefNet::conv1_out, 3, 3},
          {"conv1_bias", &RefNet::conv1_bias, 1, 1, RefNet::conv1_out},
          {"conv2", &RefNet::conv2, RefNet::features * RefNet::conv1_out, 3, 3},
          {"conv2_bias", &RefNet::conv2_bias, 1, 1, RefNet::features},
          {"head", &RefNet::head_weights, 1, net.classes, net.head_inputs()},
          {"head_bias", &RefNet::head_bias, 1, 1, net.classes}};
}

}  // namespace refnet_io_detail

inline void write_refnet(const RefNet& net, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json desc;
  desc["seed"] = net.seed;
  desc["headKind"] = std::string(to_string(net.head));
  desc["inputSize"] = net.input_size;
  desc["classes"] = net.classes;
  desc["features"] = RefNet::features;
  desc["generator"] = "mmix-lcg64";

  for (const auto& p : refnet_io_detail::params(net)) {
    TensorStack t(p.maps, p.rows, p.cols);
    t.values = net.*(p.member);
    const std::string file = std::string(p.name) + ".npy";
    write_tensor(t, dir / file);
    desc["tensors"][p.name] = {{"file", file}, {"shape", {p.maps, p.rows, p.cols}}};
  }

  std::ofstream out(dir / "refnet.json");
  if (!out) throw Error("cannot write " + (dir / "refnet.json").string());
  out << desc.dump(2) << '\n';
}

inline RefNet read_refnet(const std::filesystem::path& dir) {
  std::ifstream in(dir / "refnet.json");
  if (!in) throw Error("cannot open " + (dir / "refnet.json").string());
  nlohmann::json desc;
  try {
    desc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("refnet.json: " + std::string(e.what()));
  }

  RefNet net;
  try {
    net.seed = desc.at("seed").get<std::uint64_t>();
    net.head = parse_head_kind(desc.at("headKind").get<std::string>());
    net.input_size = desc.at("inputSize").get<std::size_t>();
    net.classes = desc.at("classes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("refnet.json: " + std::string(e.what()));
  }
  if (net.input_size < 8 || net.classes < 2) throw Error("refnet.json: invalid input size or class count");

  for (const auto& p : refnet_io_detail::params(net)) {
    const TensorStack t = read_tensor(dir / (std::string(p.name) + ".npy"));
    if (t.maps != p.maps || t.rows != p.rows || t.cols != p.cols)
      throw Error(std::string(p.name) + ".npy has an unexpected shape");
    net.*(p.member) = t.values;
  }
  return net;
}

}  // namespace malvis
