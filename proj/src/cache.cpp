#include "vcot/cache.hpp"

#include <cstdlib>

#include <json.hpp>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

ResponseCache::ResponseCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ResponseCache::entry_path(const std::string& backend_id,
                                                const std::string& key) const {
  return root_ / backend_id / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> ResponseCache::lookup(const std::string& backend_id,
                                                 const std::string& key) const {
  auto path = entry_path(backend_id, key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("corrupt cache entry " + path.string() + ": " + e.what());
  }
  if (!j.contains("response") || !j.at("response").is_string())
    throw ParseError("corrupt cache entry " + path.string() + ": missing response field");
  return j.at("response").get<std::string>();
}

void ResponseCache::store(const std::string& backend_id, const std::string& key,
                          const ChatRequest& request, const std::string& response) const {
  auto path = entry_path(backend_id, key);
  if (std::filesystem::exists(path)) return;
  std::filesystem::create_directories(path.parent_path());
  nlohmann::json entry{{"key", key},
                       {"backend_id", backend_id},
                       {"created_at", util::now_iso8601_utc()},
                       {"request", nlohmann::json::parse(canonical_request_json(backend_id, request))},
                       {"response", response}};
  util::atomic_write_file(path, entry.dump(2) + "\n");
}

std::filesystem::path ResponseCache::resolve_root(
    const std::optional<std::filesystem::path>& cli_dir, const std::filesystem::path& run_dir) {
  if (cli_dir) return *cli_dir;
  if (const char* env = std::getenv("VCOT_CACHE_DIR"); env && *env) return env;
  return run_dir / "cache";
}

}  // namespace vcot
