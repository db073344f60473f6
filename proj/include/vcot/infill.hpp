#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vcot/client.hpp"
#include "vcot/templates.hpp"
#include "vcot/types.hpp"

namespace vcot {

// Trims the string and cuts it after the first sentence terminator (. ! ?),
// keeping the terminator. A string with no terminator is returned trimmed.
std::string first_sentence(const std::string& s);

// Hash of everything that shapes chain content: backend identity, model,
// decoding params (for the vision model and, when present, the text model
// used for rephrasing) and the prompt templates. Chains persisted with a
// different fingerprint are regenerated instead of reused.
std::string generator_fingerprint(const BackendConfig& vlm,
                                  const std::optional<BackendConfig>& text,
                                  const PromptTemplates& templates);

// Step 1: shared context of a frame pair. Two image segments + step1 text.
std::string step1_common_attributes(CachingClient& vlm, const FrameRef& frame_a,
                                    const FrameRef& frame_b, const PromptTemplates& templates);

// Step 2: bridging event, given both frames and the step-1 output.
std::string step2_bridge_event(CachingClient& vlm, const FrameRef& frame_a,
                               const FrameRef& frame_b, const std::string& common,
                               const PromptTemplates& templates);

// Rephrases the raw event into one sentence. Text-only request.
std::string rephrase(CachingClient& text, const std::string& raw_event,
                     const PromptTemplates& templates);

// Runs step1 -> step2 -> rephrase for every consecutive frame pair.
// A failing pair aborts the whole chain with the pair index attached.
InfillChain build_infill_chain(CachingClient& vlm, CachingClient& text,
                               const VideoSample& sample, const PromptTemplates& templates);

// One caption per frame.
InfillChain build_caption_chain(CachingClient& vlm, const VideoSample& sample,
                                const PromptTemplates& templates);

// Chain persistence under <run_dir>/infills/<sample_id>.json.
std::filesystem::path chain_path(const std::filesystem::path& run_dir,
                                 const std::string& sample_id);
void save_chain(const std::filesystem::path& run_dir, const InfillChain& chain);
// Returns the stored chain when one exists and its fingerprint matches;
// a stale fingerprint is treated as absent so the chain is regenerated.
std::optional<InfillChain> load_chain(const std::filesystem::path& run_dir,
                                      const std::string& sample_id,
                                      const std::string& expected_fingerprint);

}  // namespace vcot
