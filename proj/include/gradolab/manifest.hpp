#ifndef GRADOLAB_MANIFEST_HPP
#define GRADOLAB_MANIFEST_HPP

#include <string>
#include <vector>

namespace gradolab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string version = kToolVersion;
  std::string config_digest;  // FNV-1a 64 of the canonical config text
  std::string command_line;
  double duration_s = 0.0;
  std::vector<std::string> outputs;
};

/// Stable 64-bit FNV-1a digest, lowercase hex.
std::string config_digest(const std::string& canonical_config);

std::string manifest_json(const RunManifest& m);

}  // namespace gradolab

#endif  // GRADOLAB_MANIFEST_HPP
