#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "malvis/error.hpp"
#include "malvis/format.hpp"
#include "malvis/imagegen.hpp"

namespace malvis {

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

/// `offset,entropy` CSV, offsets in bytes, entropy with 6 decimals.
inline std::string to_csv(const EntropyProfile& profile) {
  std::string out = "offset,entropy\n";
  for (std::size_t k = 0; k < profile.values.size(); ++k)
    out += std::to_string(k * profile.stride) + "," + fixed(profile.values[k], 6) + "\n";
  return out;
}

struct LabeledId {
  std::string id;
  std::string label;
};

/// Parses an `id,label` CSV (header row required). Fields may be double-quoted.
inline std::vector<LabeledId> parse_labels_csv(std::istream& in, const std::string& source = "labels") {
  auto split_row = [&](const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          fields.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.emplace_back();
      } else if (c != '\r') {
        fields.back() += c;
      }
    }
    if (quoted) throw Error(source + " line " + std::to_string(lineno) + ": unterminated quote");
    return fields;
  };

  std::vector<LabeledId> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_row(line, lineno);
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "id" || fields[1] != "label")
        throw Error(source + ": expected header 'id,label'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 2) throw Error(source + " line " + std::to_string(lineno) + ": expected 2 fields");
    rows.push_back({fields[0], fields[1]});
  }
  if (!header_seen) throw Error(source + ": expected header 'id,label'");
  return rows;
}

inline std::vector<LabeledId> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_labels_csv(in, path.string());
}

}  // namespace malvis
