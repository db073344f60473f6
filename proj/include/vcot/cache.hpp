#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vcot/backend.hpp"

namespace vcot {

// Content-addressed response cache. Entries live at
//   <root>/<backend_id>/<key[0:2]>/<key>.json
// where key is the sha256 of the canonical request JSON. Writes go through
// a temp file plus rename; an existing entry is never overwritten, so the
// first writer wins and concurrent runs sharing a cache stay consistent.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path entry_path(const std::string& backend_id, const std::string& key) const;

  std::optional<std::string> lookup(const std::string& backend_id, const std::string& key) const;
  void store(const std::string& backend_id, const std::string& key,
             const ChatRequest& request, const std::string& response) const;

  // Resolution order for the cache root: explicit --cache-dir, then the
  // VCOT_CACHE_DIR environment variable, then <run_dir>/cache.
  static std::filesystem::path resolve_root(const std::optional<std::filesystem::path>& cli_dir,
                                            const std::filesystem::path& run_dir);

 private:
  std::filesystem::path root_;
};

}  // namespace vcot
