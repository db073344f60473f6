#pragma once

#include <memory>
#include <string>

#include "vcot/backend.hpp"

namespace vcot {

// OpenAI-style chat completion client. Auth, when configured, comes from the
// environment variable named in BackendConfig::api_key_env; the key itself
// never appears in config files or on the command line.
//
// Retry policy: transport failures, 429 and 5xx responses are retried up to
// max_retries times with exponential backoff (retry_backoff_s * 2^attempt).
// 401/403 raise AuthError immediately; other 4xx raise ProtocolError.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(const BackendConfig& config);
  ~HttpBackend() override;

  std::string id() const override { return config_.id; }
  std::string complete(const ChatRequest& req) override;

  // Pulls the assistant text out of a chat completion response body.
  // Throws ProtocolError naming the first missing field, and
  // EmptyResponseError when the content is present but empty.
  static std::string parse_response_body(const std::string& body);

 private:
  BackendConfig config_;
  std::string api_key_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vcot
