#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <semaphore>
#include <string>

#include "vcot/backend.hpp"
#include "vcot/cache.hpp"

namespace vcot {

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config);

struct CompletionResult {
  std::string response;
  std::string fingerprint;  // cache key of the request
  bool cache_hit = false;
};

struct ClientStats {
  std::int64_t backend_calls = 0;
  std::int64_t cache_hits = 0;
};

// Pairs a backend with the response cache: every completion is answered from
// the cache when possible and persisted immediately after a backend call.
// A counting semaphore bounds the number of in-flight backend requests.
class CachingClient {
 public:
  CachingClient(const BackendConfig& config, std::shared_ptr<ResponseCache> cache);

  const BackendConfig& config() const { return config_; }
  ChatBackend& backend() { return *backend_; }

  CompletionResult complete(const ChatRequest& req);
  // Renders the prompt with this backend's model and decoding params.
  CompletionResult complete_prompt(const InterleavedPrompt& prompt);

  ClientStats stats() const;

 private:
  BackendConfig config_;
  std::unique_ptr<ChatBackend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  std::counting_semaphore<256> inflight_;
  std::atomic<std::int64_t> backend_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
};

}  // namespace vcot
