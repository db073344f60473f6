#include "vcot/infill.hpp"

#include <json.hpp>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

std::string first_sentence(const std::string& s) {
  std::string trimmed = util::trim(s);
  auto pos = trimmed.find_first_of(".!?");
  if (pos == std::string::npos) return trimmed;
  return util::trim(trimmed.substr(0, pos + 1));
}

std::string generator_fingerprint(const BackendConfig& vlm,
                                  const std::optional<BackendConfig>& text,
                                  const PromptTemplates& templates) {
  nlohmann::json j{{"vlm",
                    {{"id", vlm.id}, {"model", vlm.model}, {"decoding", vlm.decoding.to_json()}}},
                   {"templates", templates.to_json()}};
  if (text)
    j["text"] = {{"id", text->id},
                 {"model", text->model},
                 {"decoding", text->decoding.to_json()}};
  return util::sha256_hex(j.dump());
}

namespace {

InterleavedPrompt pair_prompt(const FrameRef& frame_a, const FrameRef& frame_b,
                              const std::string& text) {
  InterleavedPrompt prompt;
  prompt.segments.push_back(ImageSegment{frame_a});
  prompt.segments.push_back(ImageSegment{frame_b});
  prompt.segments.push_back(TextSegment{text});
  return prompt;
}

}  // namespace

std::string step1_common_attributes(CachingClient& vlm, const FrameRef& frame_a,
                                    const FrameRef& frame_b, const PromptTemplates& templates) {
  return vlm.complete_prompt(pair_prompt(frame_a, frame_b, templates.step1)).response;
}

std::string step2_bridge_event(CachingClient& vlm, const FrameRef& frame_a,
                               const FrameRef& frame_b, const std::string& common,
                               const PromptTemplates& templates) {
  if (common.empty()) throw EmptyResponseError("step2: common attributes string is empty");
  auto text = fill_placeholder(templates.step2, "{common}", common);
  auto event = vlm.complete_prompt(pair_prompt(frame_a, frame_b, text)).response;
  if (util::trim(event).empty()) throw EmptyResponseError("step2: model returned blank output");
  return event;
}

std::string rephrase(CachingClient& text, const std::string& raw_event,
                     const PromptTemplates& templates) {
  if (util::trim(raw_event).empty()) throw EmptyResponseError("rephrase: raw event is empty");
  InterleavedPrompt prompt;
  prompt.segments.push_back(
      TextSegment{fill_placeholder(templates.rephrase, "{event}", raw_event)});
  auto caption = first_sentence(text.complete_prompt(prompt).response);
  if (caption.empty()) throw EmptyResponseError("rephrase: model returned blank output");
  return caption;
}

InfillChain build_infill_chain(CachingClient& vlm, CachingClient& text,
                               const VideoSample& sample, const PromptTemplates& templates) {
  sample.validate();
  if (sample.frames.size() < 2)
    throw InsufficientFramesError("sample " + sample.id +
                                  ": need at least 2 frames to build infills");
  InfillChain chain;
  chain.sample_id = sample.id;
  chain.kind = ChainKind::vcot;
  chain.generator_fingerprint =
      generator_fingerprint(vlm.config(), text.config(), templates);
  for (std::size_t i = 0; i + 1 < sample.frames.size(); ++i) {
    try {
      Infill infill;
      infill.pair_index = static_cast<int>(i);
      infill.common_attributes =
          step1_common_attributes(vlm, sample.frames[i], sample.frames[i + 1], templates);
      infill.raw_event = step2_bridge_event(vlm, sample.frames[i], sample.frames[i + 1],
                                            infill.common_attributes, templates);
      infill.caption = rephrase(text, infill.raw_event, templates);
      chain.items.push_back(std::move(infill));
    } catch (const TransportError& e) {
      throw ChainAbortedError(i, "sample " + sample.id + ": " + e.what(), true);
    } catch (const std::exception& e) {
      throw ChainAbortedError(i, "sample " + sample.id + ": " + e.what());
    }
  }
  chain.validate(static_cast<int>(sample.frames.size()));
  return chain;
}

InfillChain build_caption_chain(CachingClient& vlm, const VideoSample& sample,
                                const PromptTemplates& templates) {
  sample.validate();
  if (sample.frames.size() < 2)
    throw InsufficientFramesError("sample " + sample.id +
                                  ": need at least 2 frames to build a caption chain");
  InfillChain chain;
  chain.sample_id = sample.id;
  chain.kind = ChainKind::caption;
  chain.generator_fingerprint = generator_fingerprint(vlm.config(), std::nullopt, templates);
  for (std::size_t i = 0; i < sample.frames.size(); ++i) {
    try {
      InterleavedPrompt prompt;
      prompt.segments.push_back(ImageSegment{sample.frames[i]});
      prompt.segments.push_back(TextSegment{templates.caption});
      auto caption = vlm.complete_prompt(prompt).response;
      if (util::trim(caption).empty())
        throw EmptyResponseError("caption: model returned blank output");
      chain.captions.push_back(std::move(caption));
    } catch (const TransportError& e) {
      throw ChainAbortedError(i, "sample " + sample.id + ": " + e.what(), true);
    } catch (const std::exception& e) {
      throw ChainAbortedError(i, "sample " + sample.id + ": " + e.what());
    }
  }
  chain.validate(static_cast<int>(sample.frames.size()));
  return chain;
}

std::filesystem::path chain_path(const std::filesystem::path& run_dir,
                                 const std::string& sample_id) {
  return run_dir / "infills" / (sample_id + ".json");
}

void save_chain(const std::filesystem::path& run_dir, const InfillChain& chain) {
  auto path = chain_path(run_dir, chain.sample_id);
  std::filesystem::create_directories(path.parent_path());
  nlohmann::json j = chain;
  util::atomic_write_file(path, j.dump(2) + "\n");
}

std::optional<InfillChain> load_chain(const std::filesystem::path& run_dir,
                                      const std::string& sample_id,
                                      const std::string& expected_fingerprint) {
  auto path = chain_path(run_dir, sample_id);
  if (!std::filesystem::exists(path)) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("chain file " + path.string() + ": " + e.what());
  }
  InfillChain chain = j.get<InfillChain>();
  if (chain.sample_id != sample_id)
    throw ValidationError("chain file " + path.string() + ": sample_id mismatch");
  if (chain.generator_fingerprint != expected_fingerprint) return std::nullopt;
  return chain;
}

}  // namespace vcot
