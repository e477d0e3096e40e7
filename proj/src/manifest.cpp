#include "shrinklearn/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "shrinklearn/errors.hpp"

namespace shrinklearn {

namespace {

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = "shrinklearn";
  j["tool_version"] = manifest.tool_version;
  j["command"] = manifest.argv;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["timestamp"] = manifest.timestamp.empty() ? iso8601_now() : manifest.timestamp;

  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
  if (!os) throw IoError("write failed: " + path);
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest " + path + ": " + e.what());
  }
  RunManifest m;
  m.tool_version = j.value("tool_version", "");
  m.argv = j.at("command").get<std::vector<std::string>>();
  m.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("config")) m.config = j["config"];
  if (j.contains("inputs")) m.inputs = j["inputs"].get<std::vector<std::string>>();
  if (j.contains("outputs"))
    m.outputs = j["outputs"].get<std::vector<std::string>>();
  m.timestamp = j.value("timestamp", "");
  return m;
}

}  // namespace shrinklearn
