#pragma once

// Output helpers: fixed-format numbers for bit-stable CSV, atomic file
// writes (temp + rename), and the run manifest attached to JSON outputs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlan/errors.hpp"

namespace qlan {

inline constexpr const char* kToolVersion = "0.1.0";

// 9 significant digits, '.' decimal separator, locale-independent.
inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write to '" + tmp + "'");
    out << content;
    if (!out) throw config_error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw config_error("cannot rename '" + tmp + "' to '" + path + "': " +
                       ec.message());
  }
}

struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::string> output_paths;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp_utc;
};

inline std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json manifest_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config"] = manifest.config_path;
  j["outputs"] = manifest.output_paths;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["timestamp_utc"] = manifest.timestamp_utc;
  return j;
}

inline RunManifest make_manifest(std::string command, std::string config_path,
                                 std::vector<std::string> output_paths,
                                 std::uint64_t seed) {
  RunManifest m;
  m.command = std::move(command);
  m.config_path = std::move(config_path);
  m.output_paths = std::move(output_paths);
  m.seed = seed;
  m.timestamp_utc = utc_timestamp_now();
  return m;
}

}  // namespace qlan
