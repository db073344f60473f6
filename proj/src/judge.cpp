#include "vcot/judge.hpp"

#include <cctype>
#include <regex>
#include <set>

#include "vcot/util.hpp"

namespace vcot {

namespace {

// Strips symmetric wrapping (quotes, brackets, markdown emphasis) and
// trailing punctuation until nothing changes.
std::string strip_decoration(std::string s) {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"**", "**"}, {"*", "*"}, {"`", "`"}, {"\"", "\""}, {"'", "'"},
      {"(", ")"},   {"[", "]"}, {"{", "}"}, {"<", ">"}};
  bool changed = true;
  while (changed) {
    changed = false;
    s = util::trim(s);
    for (const auto& [open, close] : pairs) {
      if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
        s = s.substr(open.size(), s.size() - open.size() - close.size());
        changed = true;
        break;
      }
    }
    while (!s.empty() && std::string(".!?:,;").find(s.back()) != std::string::npos) {
      s.pop_back();
      changed = true;
    }
  }
  return s;
}

std::optional<int> letter_to_index(char letter, std::size_t option_count) {
  auto idx = option_index(static_cast<char>(std::toupper(static_cast<unsigned char>(letter))),
                          option_count);
  if (!idx) return std::nullopt;
  return static_cast<int>(*idx);
}

// Collects the distinct letters captured by `re` across the whole response.
std::set<char> captured_letters(const std::string& raw, const std::regex& re) {
  std::set<char> letters;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), re); it != std::sregex_iterator();
       ++it) {
    letters.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(it->str(1)[0]))));
  }
  return letters;
}

}  // namespace

std::optional<int> extract_rule(const std::string& raw,
                                const std::vector<std::string>& options) {
  if (options.empty()) return std::nullopt;
  const std::size_t count = options.size();

  // Stage 1: the whole response is one letter.
  std::string stripped = strip_decoration(raw);
  if (stripped.size() == 1 && std::isalpha(static_cast<unsigned char>(stripped[0])))
    return letter_to_index(stripped[0], count);

  // Stage 2: explicit markers. A pattern that names two distinct letters is
  // ambiguous and ends extraction rather than falling through.
  static const std::regex answer_re(
      R"(answer\s*(?:is|:)\s*(?:option\s+)?\(?([A-Za-z])\)?(?![A-Za-z0-9]))",
      std::regex::icase);
  static const std::regex option_re(R"(option\s+\(?([A-Za-z])\)?(?![A-Za-z0-9]))",
                                    std::regex::icase);
  static const std::regex leading_re(R"(^\s*\(?([A-Za-z])[.):\]])");
  for (const auto* re : {&answer_re, &option_re, &leading_re}) {
    auto letters = captured_letters(raw, *re);
    if (letters.size() > 1) return std::nullopt;
    if (letters.size() == 1) return letter_to_index(*letters.begin(), count);
  }

  // Stage 3: unique verbatim option text.
  std::string haystack = util::to_lower(raw);
  std::vector<std::size_t> matched;
  for (std::size_t i = 0; i < count; ++i) {
    if (options[i].size() < 2) continue;
    if (haystack.find(util::to_lower(options[i])) != std::string::npos) matched.push_back(i);
  }
  // Drop any match whose text is a substring of a longer matched option:
  // "walk" inside a response that really says "walk the dog".
  std::vector<std::size_t> dominant;
  for (auto i : matched) {
    bool contained = false;
    for (auto j : matched) {
      if (i == j || options[j].size() <= options[i].size()) continue;
      if (util::to_lower(options[j]).find(util::to_lower(options[i])) != std::string::npos) {
        contained = true;
        break;
      }
    }
    if (!contained) dominant.push_back(i);
  }
  if (dominant.size() == 1) return static_cast<int>(dominant[0]);
  return std::nullopt;
}

JudgeResult extract_judge(CachingClient& judge, const std::string& raw,
                          const std::string& question,
                          const std::vector<std::string>& options,
                          const PromptTemplates& templates) {
  auto text = fill_placeholder(templates.judge, "{question}", question);
  text = fill_placeholder(text, "{options}", format_options(options));
  text = fill_placeholder(text, "{response}", raw);
  InterleavedPrompt prompt;
  prompt.segments.push_back(TextSegment{text});
  auto completion = judge.complete_prompt(prompt);

  JudgeResult result;
  result.fingerprint = completion.fingerprint;
  result.judge_output = completion.response;
  std::string verdict = util::trim(completion.response);
  if (!verdict.empty() && verdict.back() == '.') verdict.pop_back();
  verdict = util::trim(verdict);
  if (verdict.size() != 1 || !std::isalpha(static_cast<unsigned char>(verdict[0])))
    return result;
  char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(verdict[0])));
  if (letter == 'Z') return result;
  result.index = letter_to_index(letter, options.size());
  return result;
}

Extraction extract_answer(const std::string& raw, const std::string& question,
                          const std::vector<std::string>& options, CachingClient* judge,
                          const PromptTemplates& templates) {
  Extraction out;
  out.index = extract_rule(raw, options);
  if (out.index) {
    out.method = ExtractionMethod::rule;
    return out;
  }
  if (judge) {
    auto jr = extract_judge(*judge, raw, question, options, templates);
    out.judge_fingerprints.push_back(jr.fingerprint);
    if (jr.index) {
      out.index = jr.index;
      out.method = ExtractionMethod::judge;
      return out;
    }
  }
  out.method = ExtractionMethod::invalid;
  return out;
}

Score score_record(const std::optional<int>& extracted, int gold) {
  Score s;
  s.invalid = !extracted.has_value();
  s.correct = extracted.has_value() && *extracted == gold;
  return s;
}

}  // namespace vcot
