#pragma once

// NPY v1.0 interchange for TensorStack: little-endian float32, C order, shape (F, D1, D2).

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "malvis/error.hpp"
#include "malvis/tensor.hpp"

namespace malvis {

namespace npy_detail {

inline constexpr char magic[] = "\x93NUMPY";
inline constexpr std::size_t magic_len = 6;

inline std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

inline std::string header_value(const std::string& header, const std::string& key) {
  // Matches 'key': <value> where value runs to the next top-level comma or closing brace.
  const std::regex re("['\"]" + key + "['\"]\\s*:\\s*(\\([^)]*\\)|'[^']*'|\"[^\"]*\"|[A-Za-z]+)");
  std::smatch m;
  if (!std::regex_search(header, m, re)) throw Error("malformed header: missing '" + key + "'");
  return m[1].str();
}

inline std::vector<std::size_t> parse_shape(const std::string& tuple) {
  std::vector<std::size_t> dims;
  std::string inner = tuple.substr(1, tuple.size() - 2);
  std::stringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c) || c == 'L'; }),
              tok.end());
    if (tok.empty()) continue;
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw Error("malformed header: bad shape entry '" + tok + "'");
    dims.push_back(static_cast<std::size_t>(std::stoull(tok)));
  }
  return dims;
}

}  // namespace npy_detail

/// Parses an NPY buffer holding a rank-3 little-endian float32 C-order array.
inline TensorStack parse_tensor(const std::string& bytes) {
  using namespace npy_detail;
  if (bytes.size() < magic_len + 2 || bytes.compare(0, magic_len, magic, magic_len) != 0) throw Error("bad magic");

  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t prefix = 0;
  if (major == 1) {
    if (bytes.size() < 10) throw Error("truncated header");
    header_len = static_cast<unsigned char>(bytes[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    prefix = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw Error("truncated header");
    for (int i = 3; i >= 0; --i) header_len = (header_len << 8) | static_cast<unsigned char>(bytes[8 + i]);
    prefix = 12;
  } else {
    throw Error("unsupported version " + std::to_string(major));
  }
  if (bytes.size() < prefix + header_len) throw Error("truncated header");
  const std::string header = bytes.substr(prefix, header_len);

  const std::string descr = header_value(header, "descr");
  const std::string dtype = descr.substr(1, descr.size() - 2);
  if (dtype != "<f4" && !(dtype == "=f4" && std::endian::native == std::endian::little))
    throw Error("wrong dtype: expected <f4, got " + dtype);
  if (header_value(header, "fortran_order") != "False") throw Error("wrong order: expected C order");

  const auto shape = parse_shape(header_value(header, "shape"));
  if (shape.size() != 3) throw Error("wrong rank: expected 3, got " + std::to_string(shape.size()));

  TensorStack stack(shape[0], shape[1], shape[2]);
  const std::size_t payload = stack.values.size() * sizeof(float);
  const std::size_t offset = prefix + header_len;
  if (bytes.size() - offset < payload) throw Error("truncated payload");
  if (bytes.size() - offset > payload) throw Error("trailing bytes after payload");

  for (std::size_t i = 0; i < stack.values.size(); ++i) {
    std::uint32_t raw;
    std::memcpy(&raw, bytes.data() + offset + i * 4, 4);
    if constexpr (std::endian::native == std::endian::big) raw = byteswap32(raw);
    stack.values[i] = std::bit_cast<float>(raw);
  }
  return stack;
}

inline std::string serialize_tensor(const TensorStack& stack) {
  if (stack.values.size() != stack.maps * stack.rows * stack.cols)
    throw Error("tensor stack value count does not match shape");

  std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(stack.maps) + ", " +
                     std::to_string(stack.rows) + ", " + std::to_string(stack.cols) + "), }";
  // Pad so the payload starts on a 64-byte boundary; header ends with '\n'.
  const std::size_t unpadded = npy_detail::magic_len + 4 + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict.push_back('\n');

  std::string out(npy_detail::magic, npy_detail::magic_len);
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(dict.size() & 0xff));
  out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
  out += dict;

  const std::size_t offset = out.size();
  out.resize(offset + stack.values.size() * 4);
  for (std::size_t i = 0; i < stack.values.size(); ++i) {
    auto raw = std::bit_cast<std::uint32_t>(stack.values[i]);
    if constexpr (std::endian::native == std::endian::big) raw = npy_detail::byteswap32(raw);
    std::memcpy(out.data() + offset + i * 4, &raw, 4);
  }
  return out;
}

inline TensorStack read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_tensor(ss.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline void write_tensor(const TensorStack& stack, const std::filesystem::path& path) {
  const std::string bytes = serialize_tensor(stack);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace malvis
