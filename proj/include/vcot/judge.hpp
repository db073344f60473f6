#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcot/client.hpp"
#include "vcot/templates.hpp"
#include "vcot/types.hpp"

namespace vcot {

// Rule-based option extraction. Priority order:
//   1. the whole response is a single option letter (after stripping
//      enclosing quotes/brackets/emphasis and trailing punctuation);
//   2. an explicit marker: "answer is X" / "answer: X", then "option X",
//      then a letter leading the response as "X." / "X)" / "X:" / "(X)";
//      two distinct letters under one marker pattern mean ambiguity;
//   3. exactly one option's text occurs verbatim (case-insensitive) in the
//      response; matches of an option contained in a longer matched option
//      are ignored, and single-character option texts never match.
// Absence is a value: anything ambiguous or out of range yields nullopt and
// never an out-of-range index.
std::optional<int> extract_rule(const std::string& raw,
                                const std::vector<std::string>& options);

struct JudgeResult {
  std::optional<int> index;
  std::string fingerprint;  // cache key of the judge request
  std::string judge_output;
};

// Asks the judge backend to map the raw response to one letter or Z.
// The judge's own output is parsed strictly: a single letter (optionally
// with one trailing period) or nothing; Z and malformed output yield absent.
JudgeResult extract_judge(CachingClient& judge, const std::string& raw,
                          const std::string& question,
                          const std::vector<std::string>& options,
                          const PromptTemplates& templates);

struct Extraction {
  std::optional<int> index;
  ExtractionMethod method = ExtractionMethod::invalid;
  std::vector<std::string> judge_fingerprints;
};

// Rule stage first; judge fallback only when the rule stage abstains and a
// judge client is provided.
Extraction extract_answer(const std::string& raw, const std::string& question,
                          const std::vector<std::string>& options, CachingClient* judge,
                          const PromptTemplates& templates);

struct Score {
  bool correct = false;
  bool invalid = false;
};

// Invalid (no extracted index) counts as incorrect; the two flags are
// tallied separately so reports can show an invalid-rate alongside accuracy.
Score score_record(const std::optional<int>& extracted, int gold);

}  // namespace vcot
