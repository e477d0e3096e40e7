#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace shrinklearn {

/// Everything needed to re-run a CLI invocation: the argv to replay, the
/// resolved configuration, the effective seed, and the produced artifacts.
/// The timestamp is informational; replayed runs match on the data files,
/// not on the manifest itself.
struct RunManifest {
  std::string tool_version;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string timestamp;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

}  // namespace shrinklearn
