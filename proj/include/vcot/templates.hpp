#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace vcot {

// All prompt text used by the pipeline, overridable via a JSON config file.
// Placeholders: step2 takes {common} (the step-1 output), rephrase takes
// {event} (the raw step-2 event), mcq takes {question} and {options}. Each
// required placeholder must appear exactly once.
struct PromptTemplates {
  std::string step1 = "For these two images, what do you see in common?";
  std::string step2 =
      "These two frames have the following in common: {common}\n"
      "Infer one possible intermediate event that happens between these two frames. "
      "The event should be different from what is already shown and should bridge the "
      "logical gap between them.";
  std::string rephrase =
      "Rephrase the following event description as one concise sentence: {event}";
  std::string caption = "Describe this image in one sentence.";
  std::string mcq =
      "Question: {question}\n"
      "Options:\n"
      "{options}\n"
      "Answer with the option's letter from the given choices directly.";
  std::string raven =
      "The first eight images are the context panels of a 3x3 puzzle matrix, given in "
      "row-major order; the ninth panel is missing. The next eight images are the candidate "
      "panels, labeled A through H in order. Which candidate completes the matrix? "
      "Answer with the option's letter from the given choices directly.";
  std::string judge =
      "You are grading a multiple-choice answer.\n"
      "Question: {question}\n"
      "Options:\n"
      "{options}\n"
      "Model response: {response}\n"
      "Which option letter does the response select? Reply with exactly one letter from the "
      "options, or Z if the response does not commit to any single option.";

  void validate() const;
  nlohmann::json to_json() const;
  static PromptTemplates from_json(const nlohmann::json& j);
  static PromptTemplates load(const std::filesystem::path& path);
};

// Replaces every occurrence of `placeholder` (e.g. "{common}") in `tmpl`.
std::string fill_placeholder(const std::string& tmpl, const std::string& placeholder,
                             const std::string& value);

// "A. first\nB. second\n..." for the mcq and judge templates.
std::string format_options(const std::vector<std::string>& options);

}  // namespace vcot
