#include "vcot/frames.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include <json.hpp>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

namespace {

constexpr const char* kMarkerName = ".frames_complete.json";

bool is_frame_file(const std::filesystem::path& p) {
  auto stem = p.filename().string();
  if (stem.rfind("frame_", 0) != 0) return false;
  auto ext = util::to_lower(p.extension().string());
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".bmp";
}

struct ToolResult {
  int exit_code = -1;
  std::string output;
};

ToolResult run_tool(const std::string& command) {
  ToolResult result;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) throw ExtractionFailedError("failed to spawn extractor: " + command);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), n);
  }
  int status = ::pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

}  // namespace

std::vector<std::string> list_frame_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw LayoutError("frames directory not found: " + dir.string());
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path()))
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> extract_frames(const std::filesystem::path& video_path,
                                        const std::filesystem::path& out_dir,
                                        const ExtractorConfig& config) {
  auto marker_path = out_dir / kMarkerName;
  nlohmann::json want{{"video_path", video_path.string()},
                      {"fps", config.fps},
                      {"tool", config.tool}};
  if (std::filesystem::exists(marker_path)) {
    try {
      auto have = nlohmann::json::parse(util::read_file(marker_path));
      if (have.value("video_path", "") == video_path.string() &&
          have.value("fps", "") == config.fps) {
        return list_frame_files(out_dir);
      }
    } catch (const nlohmann::json::exception&) {
      // stale marker, re-extract below
    }
  }

  if (!std::filesystem::exists(video_path))
    throw ExtractionFailedError("video not found: " + video_path.string());
  std::filesystem::create_directories(out_dir);

  std::string out_pattern = (out_dir / "frame_%06d.jpg").string();
  std::string command = util::shell_quote(config.tool);
  for (const auto& arg : config.args_template) {
    std::string resolved = arg;
    if (auto r = util::replace_first(resolved, "{video}", video_path.string())) resolved = *r;
    if (auto r = util::replace_first(resolved, "{fps}", config.fps)) resolved = *r;
    if (auto r = util::replace_first(resolved, "{out_pattern}", out_pattern)) resolved = *r;
    command += " " + util::shell_quote(resolved);
  }

  ToolResult result = run_tool(command);
  if (result.exit_code == 127)
    throw ToolNotFoundError("extractor tool not found: " + config.tool);
  if (result.exit_code != 0)
    throw ExtractionFailedError("extractor exited " + std::to_string(result.exit_code) + ": " +
                                util::trim(result.output));

  auto files = list_frame_files(out_dir);
  if (files.empty())
    throw ExtractionFailedError("extractor produced no frames in " + out_dir.string());
  want["count"] = files.size();
  want["created_at"] = util::now_iso8601_utc();
  util::atomic_write_file(marker_path, want.dump(2));
  return files;
}

}  // namespace vcot
