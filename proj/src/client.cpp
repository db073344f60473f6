#include "vcot/client.hpp"

#include "vcot/errors.hpp"
#include "vcot/http_backend.hpp"
#include "vcot/mock_backend.hpp"

namespace vcot {

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == "mock") return std::make_unique<MockBackend>(config.id, config.fixtures_path);
  return std::make_unique<HttpBackend>(config);
}

CachingClient::CachingClient(const BackendConfig& config, std::shared_ptr<ResponseCache> cache)
    : config_(config),
      backend_(make_backend(config)),
      cache_(std::move(cache)),
      inflight_(config.max_inflight < 1 ? 1
                                        : (config.max_inflight > 256 ? 256 : config.max_inflight)) {}

CompletionResult CachingClient::complete(const ChatRequest& req) {
  CompletionResult result;
  result.fingerprint = cache_key(config_.id, req);
  if (auto cached = cache_->lookup(config_.id, result.fingerprint)) {
    ++cache_hits_;
    result.response = std::move(*cached);
    result.cache_hit = true;
    return result;
  }
  inflight_.acquire();
  try {
    result.response = backend_->complete(req);
  } catch (...) {
    inflight_.release();
    throw;
  }
  inflight_.release();
  ++backend_calls_;
  cache_->store(config_.id, result.fingerprint, req, result.response);
  return result;
}

CompletionResult CachingClient::complete_prompt(const InterleavedPrompt& prompt) {
  return complete(render_request(prompt, config_.model, config_.decoding));
}

ClientStats CachingClient::stats() const {
  return ClientStats{backend_calls_.load(), cache_hits_.load()};
}

}  // namespace vcot
