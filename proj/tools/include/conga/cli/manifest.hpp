#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace conga::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Collects what a command read and wrote, then writes manifest.json into
/// the output directory.
class RunManifest {
 public:
  RunManifest(std::string command, std::filesystem::path out_dir);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& path);
  /// `name` is relative to the output directory.
  void add_output(const std::string& name);

  /// Writes manifest.json. If one already exists (evaluate writing next to
  /// a fit), this command is appended to its "steps" list instead.
  void write() const;

  static const char* kFileName;

 private:
  nlohmann::json entry() const;

  std::string command_;
  std::filesystem::path out_dir_;
  nlohmann::json config_ = nlohmann::json::object();
  std::optional<std::uint64_t> seed_;
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json outputs_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

/// Defaults that shape every result, recorded in each manifest.
nlohmann::json defaults_json();

}  // namespace conga::cli
