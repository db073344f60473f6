#include "vcot/backend.hpp"

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

nlohmann::json DecodingParams::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (temperature) j["temperature"] = *temperature;
  if (top_p) j["top_p"] = *top_p;
  if (max_tokens) j["max_tokens"] = *max_tokens;
  if (seed) j["seed"] = *seed;
  return j;
}

DecodingParams DecodingParams::from_json(const nlohmann::json& j) {
  DecodingParams p;
  if (j.contains("temperature")) p.temperature = j.at("temperature").get<double>();
  if (j.contains("top_p")) p.top_p = j.at("top_p").get<double>();
  if (j.contains("max_tokens")) p.max_tokens = j.at("max_tokens").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

void BackendConfig::validate() const {
  if (id.empty()) throw ValidationError("backend config: id must be non-empty");
  if (kind != "http" && kind != "mock")
    throw ValidationError("backend config: kind must be \"http\" or \"mock\", got \"" + kind +
                          "\"");
  if (model.empty()) throw ValidationError("backend config: model must be non-empty");
  if (kind == "http" && base_url.empty())
    throw ValidationError("backend config: http backend requires base_url");
  if (kind == "mock" && fixtures_path.empty())
    throw ValidationError("backend config: mock backend requires fixtures_path");
  if (timeout_s <= 0) throw ValidationError("backend config: timeout_s must be positive");
  if (max_retries < 0) throw ValidationError("backend config: max_retries must be >= 0");
  if (retry_backoff_s < 0)
    throw ValidationError("backend config: retry_backoff_s must be >= 0");
  if (max_inflight < 1) throw ValidationError("backend config: max_inflight must be >= 1");
}

nlohmann::json BackendConfig::to_json() const {
  nlohmann::json j{{"id", id},
                   {"kind", kind},
                   {"model", model},
                   {"decoding", decoding.to_json()},
                   {"timeout_s", timeout_s},
                   {"max_retries", max_retries},
                   {"retry_backoff_s", retry_backoff_s},
                   {"max_inflight", max_inflight}};
  if (!base_url.empty()) j["base_url"] = base_url;
  if (!api_key_env.empty()) j["api_key_env"] = api_key_env;
  if (chat_path != "/v1/chat/completions") j["chat_path"] = chat_path;
  if (!fixtures_path.empty()) j["fixtures_path"] = fixtures_path;
  return j;
}

BackendConfig BackendConfig::from_json(const nlohmann::json& j) {
  BackendConfig c;
  c.id = j.at("id").get<std::string>();
  c.kind = j.at("kind").get<std::string>();
  c.model = j.at("model").get<std::string>();
  if (j.contains("base_url")) c.base_url = j.at("base_url").get<std::string>();
  if (j.contains("api_key_env")) c.api_key_env = j.at("api_key_env").get<std::string>();
  if (j.contains("chat_path")) c.chat_path = j.at("chat_path").get<std::string>();
  if (j.contains("fixtures_path")) c.fixtures_path = j.at("fixtures_path").get<std::string>();
  if (j.contains("decoding")) c.decoding = DecodingParams::from_json(j.at("decoding"));
  if (j.contains("timeout_s")) c.timeout_s = j.at("timeout_s").get<int>();
  if (j.contains("max_retries")) c.max_retries = j.at("max_retries").get<int>();
  if (j.contains("retry_backoff_s")) c.retry_backoff_s = j.at("retry_backoff_s").get<double>();
  if (j.contains("max_inflight")) c.max_inflight = j.at("max_inflight").get<int>();
  c.validate();
  return c;
}

nlohmann::json ChatPart::to_json() const {
  if (type == "text") return nlohmann::json{{"type", "text"}, {"text", text}};
  return nlohmann::json{{"type", "image_url"}, {"image_url", {{"url", url}}}};
}

nlohmann::json ChatMessage::to_json() const {
  nlohmann::json content = nlohmann::json::array();
  for (const auto& p : parts) content.push_back(p.to_json());
  return nlohmann::json{{"role", role}, {"content", content}};
}

nlohmann::json ChatRequest::body() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back(m.to_json());
  nlohmann::json j{{"model", model}, {"messages", msgs}};
  auto dec = decoding.to_json();
  for (auto& [k, v] : dec.items()) j[k] = v;
  return j;
}

std::string canonical_request_json(const std::string& backend_id, const ChatRequest& req) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : req.messages) msgs.push_back(m.to_json());
  // nlohmann::json objects keep keys sorted, so dump() is already canonical.
  nlohmann::json j{{"backend_id", backend_id},
                   {"model", req.model},
                   {"messages", msgs},
                   {"decoding", req.decoding.to_json()}};
  return j.dump();
}

std::string cache_key(const std::string& backend_id, const ChatRequest& req) {
  return util::sha256_hex(canonical_request_json(backend_id, req));
}

ChatRequest render_request(const InterleavedPrompt& prompt, const std::string& model,
                           const DecodingParams& decoding, const std::string& system_prompt) {
  prompt.validate();
  ChatRequest req;
  req.model = model;
  req.decoding = decoding;
  if (!system_prompt.empty()) {
    ChatMessage sys;
    sys.role = "system";
    sys.parts.push_back(ChatPart{"text", system_prompt, ""});
    req.messages.push_back(std::move(sys));
  }
  ChatMessage user;
  user.role = "user";
  for (const auto& seg : prompt.segments) {
    if (std::holds_alternative<TextSegment>(seg)) {
      user.parts.push_back(ChatPart{"text", std::get<TextSegment>(seg).text, ""});
    } else {
      const auto& img = std::get<ImageSegment>(seg);
      if (!util::looks_like_image(img.frame.source_path))
        throw ImageUnsupportedError("not a recognized image format: " +
                                    img.frame.source_path);
      auto bytes = util::read_file(img.frame.source_path);
      std::string uri = "data:" + util::mime_for_path(img.frame.source_path) + ";base64," +
                        util::base64_encode(bytes);
      user.parts.push_back(ChatPart{"image_url", "", std::move(uri)});
    }
  }
  req.messages.push_back(std::move(user));
  return req;
}

}  // namespace vcot
