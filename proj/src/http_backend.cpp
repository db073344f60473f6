#include "vcot/http_backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vcot/errors.hpp"

namespace vcot {

struct HttpBackend::Impl {
  httplib::Client client;
  explicit Impl(const std::string& base_url) : client(base_url) {}
};

HttpBackend::HttpBackend(const BackendConfig& config) : config_(config) {
  config_.validate();
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
      throw ValidationError("backend " + config_.id + ": environment variable " +
                            config_.api_key_env + " is not set");
    api_key_ = key;
  }
  impl_ = std::make_unique<Impl>(config_.base_url);
  impl_->client.set_connection_timeout(config_.timeout_s, 0);
  impl_->client.set_read_timeout(config_.timeout_s, 0);
  impl_->client.set_write_timeout(config_.timeout_s, 0);
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::parse_response_body(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("response body is not JSON: ") + e.what());
  }
  if (!j.contains("choices") || !j.at("choices").is_array() || j.at("choices").empty())
    throw ProtocolError("response missing field: choices");
  const auto& choice = j.at("choices").at(0);
  if (!choice.contains("message")) throw ProtocolError("response missing field: message");
  const auto& message = choice.at("message");
  if (!message.contains("content") || !message.at("content").is_string())
    throw ProtocolError("response missing field: content");
  auto content = message.at("content").get<std::string>();
  if (content.empty()) throw EmptyResponseError("response content is empty");
  return content;
}

std::string HttpBackend::complete(const ChatRequest& req) {
  std::string payload = req.body().dump();
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      double delay = config_.retry_backoff_s * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    auto res = impl_->client.Post(config_.chat_path, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    int status = res->status;
    if (status == 200) return parse_response_body(res->body);
    if (status == 401 || status == 403)
      throw AuthError("backend " + config_.id + ": HTTP " + std::to_string(status) + ": " +
                      res->body.substr(0, 200));
    if (status == 429 || status >= 500) {
      last_failure = "HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200);
      continue;
    }
    throw ProtocolError("backend " + config_.id + ": HTTP " + std::to_string(status) + ": " +
                        res->body.substr(0, 200));
  }
  throw TransportError("backend " + config_.id + ": request failed after " +
                       std::to_string(config_.max_retries + 1) + " attempts; last: " +
                       last_failure);
}

}  // namespace vcot
