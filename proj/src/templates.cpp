#include "vcot/templates.hpp"

#include "vcot/errors.hpp"
#include "vcot/types.hpp"
#include "vcot/util.hpp"

namespace vcot {

namespace {

void require_once(const std::string& tmpl, const std::string& placeholder,
                  const std::string& name) {
  auto n = util::count_occurrences(tmpl, placeholder);
  if (n != 1)
    throw ValidationError("template " + name + ": placeholder " + placeholder +
                          " must appear exactly once, found " + std::to_string(n));
}

void require_nonblank(const std::string& tmpl, const std::string& name) {
  if (util::trim(tmpl).empty())
    throw ValidationError("template " + name + " must not be blank");
}

}  // namespace

void PromptTemplates::validate() const {
  require_nonblank(step1, "step1");
  require_nonblank(caption, "caption");
  require_nonblank(raven, "raven");
  require_once(step2, "{common}", "step2");
  require_once(rephrase, "{event}", "rephrase");
  require_once(mcq, "{question}", "mcq");
  require_once(mcq, "{options}", "mcq");
  require_once(judge, "{question}", "judge");
  require_once(judge, "{options}", "judge");
  require_once(judge, "{response}", "judge");
}

nlohmann::json PromptTemplates::to_json() const {
  return nlohmann::json{{"step1", step1},   {"step2", step2}, {"rephrase", rephrase},
                        {"caption", caption}, {"mcq", mcq},     {"raven", raven},
                        {"judge", judge}};
}

PromptTemplates PromptTemplates::from_json(const nlohmann::json& j) {
  PromptTemplates t;
  if (j.contains("step1")) t.step1 = j.at("step1").get<std::string>();
  if (j.contains("step2")) t.step2 = j.at("step2").get<std::string>();
  if (j.contains("rephrase")) t.rephrase = j.at("rephrase").get<std::string>();
  if (j.contains("caption")) t.caption = j.at("caption").get<std::string>();
  if (j.contains("mcq")) t.mcq = j.at("mcq").get<std::string>();
  if (j.contains("raven")) t.raven = j.at("raven").get<std::string>();
  if (j.contains("judge")) t.judge = j.at("judge").get<std::string>();
  t.validate();
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("templates " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string fill_placeholder(const std::string& tmpl, const std::string& placeholder,
                             const std::string& value) {
  std::string out = tmpl;
  std::size_t pos = 0;
  while ((pos = out.find(placeholder, pos)) != std::string::npos) {
    out.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return out;
}

std::string format_options(const std::vector<std::string>& options) {
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (i) out += "\n";
    out += option_letter(i);
    out += ". ";
    out += options[i];
  }
  return out;
}

}  // namespace vcot
