#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pswitch/errors.hpp"
#include "pswitch/version.hpp"

namespace pswitch {

// FNV-1a, 64-bit: small, dependency-free and stable across platforms. Used
// only to fingerprint run outputs for reproducibility checks, not security.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read back output file: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  std::size_t bytes = 0;
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto n = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    bytes += n;
  }
  (void)bytes;
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

struct OutputRecord {
  std::string file;  // basename within the output directory
  std::uint64_t bytes = 0;
  std::uint64_t checksum = 0;
};

struct RunManifest {
  std::string name;
  std::string experiment;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
  nlohmann::json config;  // effective config after overrides
  std::vector<OutputRecord> outputs;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "simulate";
  j["version"] = version_string;
  j["name"] = m.name;
  j["experiment"] = m.experiment;
  j["seed"] = m.seed;
  j["wall_ms"] = m.wall_ms;
  j["config"] = m.config;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : m.outputs) {
    j["outputs"].push_back({{"file", o.file},
                            {"bytes", o.bytes},
                            {"fnv1a64", hex64(o.checksum)}});
  }
  return j;
}

}  // namespace pswitch
