#include "vcot/types.hpp"

#include <algorithm>

#include "vcot/errors.hpp"

namespace vcot {

char option_letter(std::size_t index) {
  if (index >= 26) throw ValidationError("option index " + std::to_string(index) + " has no letter");
  return static_cast<char>('A' + index);
}

std::optional<std::size_t> option_index(char letter, std::size_t option_count) {
  char upper = letter;
  if (upper >= 'a' && upper <= 'z') upper = static_cast<char>(upper - 'a' + 'A');
  if (upper < 'A' || upper > 'Z') return std::nullopt;
  auto idx = static_cast<std::size_t>(upper - 'A');
  if (idx >= option_count) return std::nullopt;
  return idx;
}

void SamplingSpec::validate() const {
  if (count < 2) throw ValidationError("sampling count must be >= 2 (an infill requires a pair)");
  if (stride < 1) throw ValidationError("sampling stride must be >= 1");
}

void VideoSample::validate() const {
  if (id.empty()) throw ValidationError("sample id must be non-empty");
  if (options.size() < 2) throw ValidationError("sample " + id + ": needs at least 2 options");
  if (options.size() > 26) throw ValidationError("sample " + id + ": more than 26 options");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].index != static_cast<int>(i))
      throw ValidationError("sample " + id + ": frame indices must be contiguous from 0");
  }
  if (gold_index) {
    if (*gold_index < 0 || *gold_index >= static_cast<int>(options.size()))
      throw ValidationError("sample " + id + ": gold_index " + std::to_string(*gold_index) +
                            " out of range [0," + std::to_string(options.size()) + ")");
  }
}

std::string to_string(ChainKind kind) {
  return kind == ChainKind::vcot ? "vcot" : "caption";
}

ChainKind chain_kind_from_string(const std::string& s) {
  if (s == "vcot") return ChainKind::vcot;
  if (s == "caption") return ChainKind::caption;
  throw ValidationError("unknown chain kind: " + s);
}

void InfillChain::validate(int frame_count) const {
  if (kind == ChainKind::vcot) {
    if (!captions.empty()) throw ValidationError("vcot chain must not carry captions");
    if (items.size() != static_cast<std::size_t>(frame_count - 1))
      throw ValidationError("chain " + sample_id + ": expected " +
                            std::to_string(frame_count - 1) + " infills, got " +
                            std::to_string(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].pair_index != static_cast<int>(i))
        throw ValidationError("chain " + sample_id + ": pair indices must be contiguous from 0");
      if (items[i].caption.empty())
        throw ValidationError("chain " + sample_id + ": empty caption at pair " + std::to_string(i));
    }
  } else {
    if (!items.empty()) throw ValidationError("caption chain must not carry infill items");
    if (captions.size() != static_cast<std::size_t>(frame_count))
      throw ValidationError("chain " + sample_id + ": expected " + std::to_string(frame_count) +
                            " captions, got " + std::to_string(captions.size()));
  }
}

std::size_t InterleavedPrompt::image_count() const {
  return static_cast<std::size_t>(std::count_if(
      segments.begin(), segments.end(),
      [](const Segment& s) { return std::holds_alternative<ImageSegment>(s); }));
}

void InterleavedPrompt::validate() const {
  if (segments.empty() || !std::holds_alternative<TextSegment>(segments.back()))
    throw ValidationError("prompt must end with a text segment holding the question");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::base: return "base";
    case Mode::vcot: return "vcot";
    case Mode::captions: return "captions";
  }
  throw ValidationError("bad mode enum");
}

Mode mode_from_string(const std::string& s) {
  if (s == "base") return Mode::base;
  if (s == "vcot") return Mode::vcot;
  if (s == "captions") return Mode::captions;
  throw ValidationError("unknown mode: " + s);
}

std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::none: return "none";
    case Perturbation::visual_shuffle: return "visual_shuffle";
    case Perturbation::text_shuffle: return "text_shuffle";
  }
  throw ValidationError("bad perturbation enum");
}

Perturbation perturbation_from_string(const std::string& s) {
  if (s == "none") return Perturbation::none;
  if (s == "visual_shuffle" || s == "visual-shuffle") return Perturbation::visual_shuffle;
  if (s == "text_shuffle" || s == "text-shuffle") return Perturbation::text_shuffle;
  throw ValidationError("unknown perturbation: " + s);
}

void Condition::validate() const {
  sampling.validate();
  if (perturbation == Perturbation::text_shuffle && mode == Mode::base)
    throw ValidationError("text_shuffle requires mode vcot or captions (no infills to swap)");
}

std::string to_string(ExtractionMethod m) {
  switch (m) {
    case ExtractionMethod::rule: return "rule";
    case ExtractionMethod::judge: return "judge";
    case ExtractionMethod::invalid: return "invalid";
  }
  throw ValidationError("bad extraction method enum");
}

ExtractionMethod extraction_method_from_string(const std::string& s) {
  if (s == "rule") return ExtractionMethod::rule;
  if (s == "judge") return ExtractionMethod::judge;
  if (s == "invalid") return ExtractionMethod::invalid;
  throw ValidationError("unknown extraction method: " + s);
}

void to_json(json& j, const FrameRef& v) {
  j = json{{"sample_id", v.sample_id},
           {"index", v.index},
           {"source_path", v.source_path},
           {"source_index", v.source_index}};
}

void from_json(const json& j, FrameRef& v) {
  j.at("sample_id").get_to(v.sample_id);
  j.at("index").get_to(v.index);
  j.at("source_path").get_to(v.source_path);
  j.at("source_index").get_to(v.source_index);
}

void to_json(json& j, const SamplingSpec& v) {
  j = json{{"count", v.count}, {"stride", v.stride}};
}

void from_json(const json& j, SamplingSpec& v) {
  j.at("count").get_to(v.count);
  j.at("stride").get_to(v.stride);
}

void to_json(json& j, const VideoSample& v) {
  j = json{{"id", v.id},
           {"frames", v.frames},
           {"question", v.question},
           {"options", v.options}};
  if (v.gold_index) j["gold_index"] = *v.gold_index;
}

void from_json(const json& j, VideoSample& v) {
  j.at("id").get_to(v.id);
  j.at("frames").get_to(v.frames);
  j.at("question").get_to(v.question);
  j.at("options").get_to(v.options);
  v.gold_index.reset();
  if (j.contains("gold_index") && !j.at("gold_index").is_null())
    v.gold_index = j.at("gold_index").get<int>();
}

void to_json(json& j, const Infill& v) {
  j = json{{"pair_index", v.pair_index},
           {"common_attributes", v.common_attributes},
           {"raw_event", v.raw_event},
           {"caption", v.caption}};
}

void from_json(const json& j, Infill& v) {
  j.at("pair_index").get_to(v.pair_index);
  j.at("common_attributes").get_to(v.common_attributes);
  j.at("raw_event").get_to(v.raw_event);
  j.at("caption").get_to(v.caption);
}

void to_json(json& j, const InfillChain& v) {
  j = json{{"sample_id", v.sample_id},
           {"kind", to_string(v.kind)},
           {"generator_fingerprint", v.generator_fingerprint}};
  if (v.kind == ChainKind::vcot) {
    j["items"] = v.items;
  } else {
    j["items"] = v.captions;
  }
}

void from_json(const json& j, InfillChain& v) {
  j.at("sample_id").get_to(v.sample_id);
  v.kind = chain_kind_from_string(j.at("kind").get<std::string>());
  j.at("generator_fingerprint").get_to(v.generator_fingerprint);
  v.items.clear();
  v.captions.clear();
  if (v.kind == ChainKind::vcot) {
    j.at("items").get_to(v.items);
  } else {
    j.at("items").get_to(v.captions);
  }
}

void to_json(json& j, const InterleavedPrompt& v) {
  json segs = json::array();
  for (const auto& seg : v.segments) {
    if (const auto* img = std::get_if<ImageSegment>(&seg)) {
      json f;
      to_json(f, img->frame);
      segs.push_back(json{{"type", "image"}, {"frame", f}});
    } else {
      segs.push_back(json{{"type", "text"}, {"text", std::get<TextSegment>(seg).text}});
    }
  }
  j = json{{"segments", segs}};
}

void from_json(const json& j, InterleavedPrompt& v) {
  v.segments.clear();
  for (const auto& seg : j.at("segments")) {
    auto type = seg.at("type").get<std::string>();
    if (type == "image") {
      ImageSegment img;
      seg.at("frame").get_to(img.frame);
      v.segments.emplace_back(img);
    } else if (type == "text") {
      v.segments.emplace_back(TextSegment{seg.at("text").get<std::string>()});
    } else {
      throw ValidationError("unknown segment type: " + type);
    }
  }
  v.validate();
}

void to_json(json& j, const Condition& v) {
  j = json{{"mode", to_string(v.mode)},
           {"perturbation", to_string(v.perturbation)},
           {"sampling", v.sampling},
           {"seed", v.seed}};
}

void from_json(const json& j, Condition& v) {
  v.mode = mode_from_string(j.at("mode").get<std::string>());
  v.perturbation = perturbation_from_string(j.at("perturbation").get<std::string>());
  j.at("sampling").get_to(v.sampling);
  j.at("seed").get_to(v.seed);
}

void to_json(json& j, const EvalRecord& v) {
  j = json{{"sample_id", v.sample_id},
           {"condition", v.condition},
           {"raw_response", v.raw_response},
           {"extraction_method", to_string(v.extraction_method)},
           {"request_fingerprints", v.request_fingerprints}};
  j["extracted_index"] = v.extracted_index ? json(*v.extracted_index) : json(nullptr);
  j["correct"] = v.correct ? json(*v.correct) : json(nullptr);
}

void from_json(const json& j, EvalRecord& v) {
  j.at("sample_id").get_to(v.sample_id);
  j.at("condition").get_to(v.condition);
  j.at("raw_response").get_to(v.raw_response);
  v.extraction_method = extraction_method_from_string(j.at("extraction_method").get<std::string>());
  j.at("request_fingerprints").get_to(v.request_fingerprints);
  v.extracted_index.reset();
  if (!j.at("extracted_index").is_null()) v.extracted_index = j.at("extracted_index").get<int>();
  v.correct.reset();
  if (!j.at("correct").is_null()) v.correct = j.at("correct").get<bool>();
}

std::string to_jsonl_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace vcot
