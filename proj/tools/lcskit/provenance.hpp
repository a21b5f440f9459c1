#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lcskit {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const fs::path& path);

/// Exclusive lock on an output directory, released on destruction.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir);
  ~DirLock();
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
};

/// Content-addressed stage: the key hashes the stage name, its parameters
/// and the bytes of its inputs. Every output gets a `<name>.prov.json` sidecar.
class Stage {
 public:
  Stage(std::string name, json params, std::vector<fs::path> inputs, std::vector<fs::path> outputs);

  const std::string& key() const { return key_; }
  /// True when every output exists and its sidecar records this key and the output's current hash.
  bool up_to_date() const;
  /// Writes sidecars after the outputs were produced.
  void record(double wall_seconds, const json& extra = json::object()) const;

  static fs::path sidecar(const fs::path& output);

 private:
  std::string name_;
  json params_;
  json input_hashes_;
  std::vector<fs::path> outputs_;
  std::string key_;
};

std::string version_string();

}  // namespace lcskit
