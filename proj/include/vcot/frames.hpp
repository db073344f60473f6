#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vcot {

struct ExtractorConfig {
  std::string tool = "ffmpeg";
  // {video}, {fps}, {out_pattern} are substituted; out_pattern is
  // <out_dir>/frame_%06d.jpg so file ordering defines source_index.
  std::vector<std::string> args_template = {"-hide_banner", "-loglevel", "error",  "-i",
                                            "{video}",      "-vf",       "fps={fps}",
                                            "-start_number", "0",        "{out_pattern}"};
  std::string fps = "1";
};

/// Sorted frame files (frame_*.jpg|jpeg|png|bmp) in a pre-extracted directory.
std::vector<std::string> list_frame_files(const std::filesystem::path& dir);

/// Runs the external extractor unless a matching completion marker already
/// exists in out_dir. Returns the ordered frame paths.
std::vector<std::string> extract_frames(const std::filesystem::path& video_path,
                                        const std::filesystem::path& out_dir,
                                        const ExtractorConfig& config);

}  // namespace vcot
