#pragma once

#include <optional>
#include <string>

#include "vcot/raven.hpp"
#include "vcot/templates.hpp"
#include "vcot/types.hpp"

namespace vcot {

// The question block appended as the final text segment: the mcq template
// instantiated with the sample's question and lettered options.
std::string mcq_text(const VideoSample& sample, const PromptTemplates& templates);

// Interleaves frames, optional per-pair or per-frame text, and the question:
//   base:     [img0 .. imgN-1, Q]                       (chain must be absent)
//   vcot:     [img0, txt0, img1, .. txtN-2, imgN-1, Q]  (chain kind vcot, N-1 items)
//   captions: [img0, cap0, img1, cap1, .. imgN-1, capN-1, Q]
InterleavedPrompt assemble(const VideoSample& sample, const std::optional<InfillChain>& chain,
                           const Condition& condition, const PromptTemplates& templates);

// 8 context panels, 8 candidate panels (letters A..H in order), instruction.
InterleavedPrompt assemble_raven(const RavenPuzzle& puzzle, const PromptTemplates& templates);

}  // namespace vcot
