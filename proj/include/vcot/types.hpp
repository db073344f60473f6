#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vcot {

using json = nlohmann::json;

/// Maps option position k to its letter: 0 -> 'A', 1 -> 'B', ...
char option_letter(std::size_t index);
/// Inverse mapping; nullopt for non-letters or indices at/past `option_count`.
std::optional<std::size_t> option_index(char letter, std::size_t option_count);

struct FrameRef {
  std::string sample_id;
  int index = 0;         // position within the sampled sequence, 0-based
  std::string source_path;
  int source_index = 0;  // index in the underlying extracted-frame sequence

  bool operator==(const FrameRef&) const = default;
};

struct SamplingSpec {
  int count = 2;   // N, frames per sample
  int stride = 1;  // s, temporal compression factor

  void validate() const;
  bool operator==(const SamplingSpec&) const = default;
};

struct VideoSample {
  std::string id;
  std::vector<FrameRef> frames;
  std::string question;
  std::vector<std::string> options;
  std::optional<int> gold_index;

  void validate() const;
  bool operator==(const VideoSample&) const = default;
};

struct Infill {
  int pair_index = 0;  // sits between frames pair_index and pair_index+1
  std::string common_attributes;
  std::string raw_event;
  std::string caption;

  bool operator==(const Infill&) const = default;
};

enum class ChainKind { vcot, caption };

std::string to_string(ChainKind kind);
ChainKind chain_kind_from_string(const std::string& s);

struct InfillChain {
  std::string sample_id;
  ChainKind kind = ChainKind::vcot;
  std::vector<Infill> items;          // populated for kind == vcot
  std::vector<std::string> captions;  // populated for kind == caption
  std::string generator_fingerprint;

  std::size_t size() const { return kind == ChainKind::vcot ? items.size() : captions.size(); }
  /// vcot chains carry N-1 items, caption chains N items.
  void validate(int frame_count) const;
  bool operator==(const InfillChain&) const = default;
};

struct ImageSegment {
  FrameRef frame;
  bool operator==(const ImageSegment&) const = default;
};

struct TextSegment {
  std::string text;
  bool operator==(const TextSegment&) const = default;
};

using Segment = std::variant<ImageSegment, TextSegment>;

struct InterleavedPrompt {
  std::vector<Segment> segments;  // last segment is always the question text

  std::size_t image_count() const;
  void validate() const;
  bool operator==(const InterleavedPrompt&) const = default;
};

enum class Mode { base, vcot, captions };
enum class Perturbation { none, visual_shuffle, text_shuffle };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);
std::string to_string(Perturbation p);
Perturbation perturbation_from_string(const std::string& s);

struct Condition {
  Mode mode = Mode::base;
  Perturbation perturbation = Perturbation::none;
  SamplingSpec sampling;
  long long seed = 0;

  void validate() const;  // text_shuffle needs infills, so mode must not be base
  bool operator==(const Condition&) const = default;
};

enum class ExtractionMethod { rule, judge, invalid };

std::string to_string(ExtractionMethod m);
ExtractionMethod extraction_method_from_string(const std::string& s);

struct EvalRecord {
  std::string sample_id;
  Condition condition;
  std::string raw_response;
  std::optional<int> extracted_index;
  ExtractionMethod extraction_method = ExtractionMethod::invalid;
  std::optional<bool> correct;
  std::vector<std::string> request_fingerprints;

  bool operator==(const EvalRecord&) const = default;
};

// JSON serialization, field names exactly as in the on-disk record format.
void to_json(json& j, const FrameRef& v);
void from_json(const json& j, FrameRef& v);
void to_json(json& j, const SamplingSpec& v);
void from_json(const json& j, SamplingSpec& v);
void to_json(json& j, const VideoSample& v);
void from_json(const json& j, VideoSample& v);
void to_json(json& j, const Infill& v);
void from_json(const json& j, Infill& v);
void to_json(json& j, const InfillChain& v);
void from_json(const json& j, InfillChain& v);
void to_json(json& j, const InterleavedPrompt& v);
void from_json(const json& j, InterleavedPrompt& v);
void to_json(json& j, const Condition& v);
void from_json(const json& j, Condition& v);
void to_json(json& j, const EvalRecord& v);
void from_json(const json& j, EvalRecord& v);

/// One canonical line for line-delimited record files: sorted keys, UTF-8,
/// invalid bytes replaced, no trailing newline.
std::string to_jsonl_line(const json& j);

}  // namespace vcot
