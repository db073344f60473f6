#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vcot/types.hpp"

namespace vcot {

struct ManifestEntry {
  std::string id;
  std::optional<std::string> video_path;
  std::optional<std::string> frames_dir;
  std::string question;
  std::vector<std::string> options;
  std::optional<int> gold_index;

  bool operator==(const ManifestEntry&) const = default;
};

struct ManifestMetadata {
  std::string benchmark_name = "unknown";
  int option_count = 0;

  bool operator==(const ManifestMetadata&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  ManifestMetadata metadata;

  bool operator==(const Manifest&) const = default;
};

/// Parses a line-delimited manifest. An optional leading header record
/// (keyed "benchmark_name" / "option_count") sets metadata; every other
/// line is an entry with `id`, `question`, `options`, and exactly one of
/// `video_path` / `frames_dir`. Throws ParseError with the offending line
/// number, or ValidationError naming the violated constraint.
Manifest load_manifest(const std::filesystem::path& path);

std::string serialize_manifest(const Manifest& manifest);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace vcot
