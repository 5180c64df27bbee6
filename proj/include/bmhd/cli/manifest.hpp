#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bmhd/cli/config.hpp"

namespace bmhd::cli {

std::string sha256_hex(std::string_view bytes);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

/// Output directory of one run. Every artifact goes through write() so the
/// manifest lists it with its hash; nothing time-dependent is written.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write(const std::string& rel, const std::string& bytes);
  const std::vector<ManifestEntry>& entries() const { return entries_; }

  /// Writes manifest.json: kind, seed, config hash, status, exit code and
  /// the files sorted by path.
  void write_manifest(const ExperimentConfig& c, const std::string& status, int exit_code);

 private:
  std::filesystem::path root_;
  std::vector<ManifestEntry> entries_;
};

struct Manifest {
  std::string kind;
  std::uint64_t seed = 0;
  std::string status;
  int exit_code = 0;
  std::vector<ManifestEntry> files;
};

Manifest read_manifest(const std::filesystem::path& path);

/// Recomputes every listed hash; returns the paths that differ or are missing.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace bmhd::cli
