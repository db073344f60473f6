#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/backend.hpp"

namespace vcot {

// Scripted backend driven by a JSON fixture file:
//   {
//     "exact":    { "<full prompt text>": "<response>", ... },
//     "contains": [ {"needle": "...", "response": "...", "unique": false}, ... ],
//     "sequence": [ "<response>", ... ],
//     "default":  "<response>"
//   }
// All keys are optional. Matching is against the concatenated text parts of
// the request (messages in order, parts joined by newlines). Priority:
// exact match, then first matching "contains" entry, then the next unconsumed
// "sequence" element, then "default". With no match at all the backend throws
// UnmatchedRequestError so a test never silently swallows an unexpected call.
//
// A "contains" entry with "unique": true appends an 8-hex-digit digest of the
// full request to its response. The response is still a pure function of the
// request, but requests that differ only in image bytes get distinct strings.
class MockBackend : public ChatBackend {
 public:
  MockBackend(std::string id, const std::filesystem::path& fixtures_path);

  std::string id() const override { return id_; }
  std::string complete(const ChatRequest& req) override;

  int calls() const { return calls_; }
  static std::string match_text(const ChatRequest& req);

 private:
  struct ContainsEntry {
    std::string needle;
    std::string response;
    bool unique = false;
  };

  std::string id_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> exact_;
  std::vector<ContainsEntry> contains_;
  std::vector<std::string> sequence_;
  std::size_t sequence_pos_ = 0;
  std::string default_;
  bool has_default_ = false;
  int calls_ = 0;
};

}  // namespace vcot
