#include "vcot/prompt.hpp"

#include "vcot/errors.hpp"

namespace vcot {

std::string mcq_text(const VideoSample& sample, const PromptTemplates& templates) {
  auto text = fill_placeholder(templates.mcq, "{question}", sample.question);
  return fill_placeholder(text, "{options}", format_options(sample.options));
}

InterleavedPrompt assemble(const VideoSample& sample, const std::optional<InfillChain>& chain,
                           const Condition& condition, const PromptTemplates& templates) {
  sample.validate();
  condition.validate();
  const int n = static_cast<int>(sample.frames.size());

  if (condition.mode == Mode::base) {
    if (chain)
      throw ChainShapeMismatchError("base mode takes no chain, got one for sample " + sample.id);
  } else {
    if (!chain)
      throw ChainShapeMismatchError(to_string(condition.mode) +
                                    " mode requires a chain for sample " + sample.id);
    ChainKind want = condition.mode == Mode::vcot ? ChainKind::vcot : ChainKind::caption;
    if (chain->kind != want)
      throw ChainShapeMismatchError("sample " + sample.id + ": mode " +
                                    to_string(condition.mode) + " got a " +
                                    to_string(chain->kind) + " chain");
    try {
      chain->validate(n);
    } catch (const std::exception& e) {
      throw ChainShapeMismatchError(e.what());
    }
  }

  InterleavedPrompt prompt;
  for (int i = 0; i < n; ++i) {
    prompt.segments.push_back(ImageSegment{sample.frames[i]});
    if (condition.mode == Mode::vcot && i + 1 < n)
      prompt.segments.push_back(TextSegment{chain->items[i].caption});
    if (condition.mode == Mode::captions)
      prompt.segments.push_back(TextSegment{chain->captions[i]});
  }
  prompt.segments.push_back(TextSegment{mcq_text(sample, templates)});
  prompt.validate();
  return prompt;
}

InterleavedPrompt assemble_raven(const RavenPuzzle& puzzle, const PromptTemplates& templates) {
  puzzle.validate();
  InterleavedPrompt prompt;
  for (int i = 0; i < 8; ++i) {
    FrameRef ref{puzzle.id, i, puzzle.context_panels[i], i};
    prompt.segments.push_back(ImageSegment{ref});
  }
  for (int i = 0; i < 8; ++i) {
    FrameRef ref{puzzle.id, 8 + i, puzzle.candidate_panels[i], 8 + i};
    prompt.segments.push_back(ImageSegment{ref});
  }
  prompt.segments.push_back(TextSegment{templates.raven});
  prompt.validate();
  return prompt;
}

}  // namespace vcot
