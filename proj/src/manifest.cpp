#include "vcot/manifest.hpp"

#include <set>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

namespace {

ManifestEntry parse_entry(const json& j, std::size_t line_no) {
  ManifestEntry entry;
  try {
    j.at("id").get_to(entry.id);
    j.at("question").get_to(entry.question);
    j.at("options").get_to(entry.options);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad manifest entry: ") + ex.what(), line_no);
  }
  if (j.contains("video_path") && !j.at("video_path").is_null())
    entry.video_path = j.at("video_path").get<std::string>();
  if (j.contains("frames_dir") && !j.at("frames_dir").is_null())
    entry.frames_dir = j.at("frames_dir").get<std::string>();
  if (j.contains("gold_index") && !j.at("gold_index").is_null())
    entry.gold_index = j.at("gold_index").get<int>();

  if (entry.id.empty()) throw ValidationError("empty id");
  if (entry.video_path.has_value() == entry.frames_dir.has_value())
    throw ValidationError("entry " + entry.id + ": exactly one of video_path/frames_dir required");
  if (entry.options.size() < 2)
    throw ValidationError("entry " + entry.id + ": needs at least 2 options");
  if (entry.options.size() > 26)
    throw ValidationError("entry " + entry.id + ": more than 26 options");
  if (entry.gold_index &&
      (*entry.gold_index < 0 || *entry.gold_index >= static_cast<int>(entry.options.size())))
    throw ValidationError("entry " + entry.id + ": gold_index " +
                          std::to_string(*entry.gold_index) + " out of range [0," +
                          std::to_string(entry.options.size()) + ")");
  return entry;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ParseError("manifest not found: " + path.string());
  Manifest manifest;
  std::set<std::string> seen_ids;
  bool metadata_seen = false;
  std::size_t line_no = 0;
  for (const auto& line : util::read_lines(path)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ParseError(std::string("malformed record: ") + ex.what(), line_no);
    }
    if (!j.is_object()) throw ParseError("record must be an object", line_no);

    if (j.contains("benchmark_name") || (j.contains("option_count") && !j.contains("id"))) {
      if (metadata_seen) throw ParseError("duplicate metadata record", line_no);
      if (!manifest.entries.empty()) throw ParseError("metadata must precede entries", line_no);
      metadata_seen = true;
      if (j.contains("benchmark_name"))
        manifest.metadata.benchmark_name = j.at("benchmark_name").get<std::string>();
      if (j.contains("option_count"))
        manifest.metadata.option_count = j.at("option_count").get<int>();
      continue;
    }

    ManifestEntry entry = parse_entry(j, line_no);
    if (!seen_ids.insert(entry.id).second)
      throw ValidationError("duplicate id " + entry.id);
    if (manifest.metadata.option_count > 0 &&
        static_cast<int>(entry.options.size()) != manifest.metadata.option_count)
      throw ValidationError("entry " + entry.id + ": has " +
                            std::to_string(entry.options.size()) + " options, manifest declares " +
                            std::to_string(manifest.metadata.option_count));
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw ValidationError("manifest has no entries: " + path.string());
  if (manifest.metadata.option_count == 0)
    manifest.metadata.option_count = static_cast<int>(manifest.entries.front().options.size());
  return manifest;
}

std::string serialize_manifest(const Manifest& manifest) {
  std::string out;
  json header{{"benchmark_name", manifest.metadata.benchmark_name},
              {"option_count", manifest.metadata.option_count}};
  out += to_jsonl_line(header);
  out += '\n';
  for (const auto& entry : manifest.entries) {
    json j{{"id", entry.id}, {"question", entry.question}, {"options", entry.options}};
    if (entry.video_path) j["video_path"] = *entry.video_path;
    if (entry.frames_dir) j["frames_dir"] = *entry.frames_dir;
    if (entry.gold_index) j["gold_index"] = *entry.gold_index;
    out += to_jsonl_line(j);
    out += '\n';
  }
  return out;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  util::atomic_write_file(path, serialize_manifest(manifest));
}

}  // namespace vcot
