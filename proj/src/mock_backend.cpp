#include "vcot/mock_backend.hpp"

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

MockBackend::MockBackend(std::string id, const std::filesystem::path& fixtures_path)
    : id_(std::move(id)) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(fixtures_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("mock fixtures " + fixtures_path.string() + ": " + e.what());
  }
  if (!j.is_object())
    throw ValidationError("mock fixtures " + fixtures_path.string() + ": expected a JSON object");
  if (j.contains("exact")) {
    for (auto& [k, v] : j.at("exact").items()) exact_[k] = v.get<std::string>();
  }
  if (j.contains("contains")) {
    for (const auto& e : j.at("contains")) {
      ContainsEntry entry;
      entry.needle = e.at("needle").get<std::string>();
      entry.response = e.at("response").get<std::string>();
      if (e.contains("unique")) entry.unique = e.at("unique").get<bool>();
      if (entry.needle.empty())
        throw ValidationError("mock fixtures: contains entry with empty needle");
      contains_.push_back(std::move(entry));
    }
  }
  if (j.contains("sequence")) {
    for (const auto& e : j.at("sequence")) sequence_.push_back(e.get<std::string>());
  }
  if (j.contains("default")) {
    default_ = j.at("default").get<std::string>();
    has_default_ = true;
  }
}

std::string MockBackend::match_text(const ChatRequest& req) {
  std::string text;
  for (const auto& msg : req.messages) {
    for (const auto& part : msg.parts) {
      if (part.type != "text") continue;
      if (!text.empty()) text += "\n";
      text += part.text;
    }
  }
  return text;
}

std::string MockBackend::complete(const ChatRequest& req) {
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  std::string text = match_text(req);
  if (auto it = exact_.find(text); it != exact_.end()) return it->second;
  for (const auto& entry : contains_) {
    if (text.find(entry.needle) == std::string::npos) continue;
    if (!entry.unique) return entry.response;
    return entry.response + " [" + cache_key(id_, req).substr(0, 8) + "]";
  }
  if (sequence_pos_ < sequence_.size()) return sequence_[sequence_pos_++];
  if (has_default_) return default_;
  throw UnmatchedRequestError("mock backend " + id_ + ": no fixture matches request text: " +
                              (text.size() > 200 ? text.substr(0, 200) + "..." : text));
}

}  // namespace vcot
