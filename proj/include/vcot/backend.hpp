#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/types.hpp"

namespace vcot {

// Decoding parameters forwarded verbatim to the chat completion endpoint.
// Only the fields that are set are serialized, so two configs that differ
// merely in "unset vs default" hash to different cache keys on purpose:
// the remote default may change underneath us.
struct DecodingParams {
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::optional<std::uint64_t> seed;

  nlohmann::json to_json() const;
  static DecodingParams from_json(const nlohmann::json& j);
  bool operator==(const DecodingParams&) const = default;
};

struct BackendConfig {
  std::string id;           // names the cache subdirectory
  std::string kind;         // "http" or "mock"
  std::string model;        // model name sent in the request payload
  std::string base_url;     // http only
  std::string api_key_env;  // http only; name of env var holding the key
  std::string chat_path = "/v1/chat/completions";
  std::string fixtures_path;  // mock only
  DecodingParams decoding;
  int timeout_s = 120;
  int max_retries = 3;
  double retry_backoff_s = 1.0;
  int max_inflight = 4;

  void validate() const;
  nlohmann::json to_json() const;
  static BackendConfig from_json(const nlohmann::json& j);
  bool operator==(const BackendConfig&) const = default;
};

// One content part of a chat message: either text or an embedded image.
struct ChatPart {
  std::string type;  // "text" or "image_url"
  std::string text;  // type == "text"
  std::string url;   // type == "image_url"; data: URI

  nlohmann::json to_json() const;
};

struct ChatMessage {
  std::string role;
  std::vector<ChatPart> parts;

  nlohmann::json to_json() const;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  DecodingParams decoding;

  // Payload sent over the wire.
  nlohmann::json body() const;
};

// Canonical JSON used for cache keying: object with sorted keys covering
// backend id, model, messages and decoding params. Stable across runs and
// platforms as long as inputs are stable.
std::string canonical_request_json(const std::string& backend_id, const ChatRequest& req);
std::string cache_key(const std::string& backend_id, const ChatRequest& req);

// Builds a single-user-message request from an interleaved prompt, embedding
// each image file as a base64 data: URI. Throws ImageUnsupportedError when a
// file does not look like a known raster format.
ChatRequest render_request(const InterleavedPrompt& prompt, const std::string& model,
                           const DecodingParams& decoding,
                           const std::string& system_prompt = "");

struct ChatBackend {
  virtual ~ChatBackend() = default;
  virtual std::string id() const = 0;
  // Returns the assistant message content. Throws on failure.
  virtual std::string complete(const ChatRequest& req) = 0;
};

}  // namespace vcot
