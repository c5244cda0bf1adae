#include "gradolab/manifest.hpp"

#include <cstdint>
#include <json.hpp>

namespace gradolab {

std::string config_digest(const std::string& canonical_config) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_config) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json doc;
  doc["version"] = m.version;
  doc["config_digest"] = m.config_digest;
  doc["command_line"] = m.command_line;
  doc["duration_s"] = m.duration_s;
  doc["outputs"] = m.outputs;
  return doc.dump(2) + "\n";
}

}  // namespace gradolab
