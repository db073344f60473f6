#include "vcot/raven.hpp"

#include <algorithm>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

std::string to_string(RavenCategory c) {
  switch (c) {
    case RavenCategory::center: return "center";
    case RavenCategory::dist_4: return "dist_4";
    case RavenCategory::dist_9: return "dist_9";
    case RavenCategory::in_out: return "in_out";
    case RavenCategory::indist4_out: return "indist4_out";
    case RavenCategory::left_right: return "left_right";
    case RavenCategory::up_down: return "up_down";
  }
  throw ValidationError("bad raven category enum");
}

RavenCategory raven_category_from_string(const std::string& s) {
  std::string key = util::to_lower(s);
  if (key == "center" || key == "center_single") return RavenCategory::center;
  if (key == "dist_4" || key == "distribute_four") return RavenCategory::dist_4;
  if (key == "dist_9" || key == "distribute_nine") return RavenCategory::dist_9;
  if (key == "in_out" || key == "in_center_single_out_center_single") return RavenCategory::in_out;
  if (key == "indist4_out" || key == "in_distribute_four_out_center_single")
    return RavenCategory::indist4_out;
  if (key == "left_right" || key == "left_center_single_right_center_single")
    return RavenCategory::left_right;
  if (key == "up_down" || key == "up_center_single_down_center_single")
    return RavenCategory::up_down;
  throw UnknownCategoryError("unknown i-RAVEN category: " + s);
}

void RavenPuzzle::validate() const {
  if (context_panels.size() != 8)
    throw LayoutError("puzzle " + id + ": expected 8 context panels, got " +
                      std::to_string(context_panels.size()));
  if (candidate_panels.size() != 8)
    throw LayoutError("puzzle " + id + ": expected 8 candidate panels, got " +
                      std::to_string(candidate_panels.size()));
  if (gold_index < 0 || gold_index >= 8)
    throw LayoutError("puzzle " + id + ": answer index " + std::to_string(gold_index) +
                      " out of range [0,8)");
}

namespace {

RavenPuzzle load_puzzle(const std::filesystem::path& dir, RavenCategory category) {
  RavenPuzzle puzzle;
  puzzle.category = category;
  puzzle.id = to_string(category) + "/" + dir.filename().string();
  for (int i = 0; i < 8; ++i) {
    auto panel = dir / ("context_" + std::to_string(i) + ".png");
    if (!std::filesystem::exists(panel))
      throw LayoutError("puzzle " + puzzle.id + ": missing " + panel.filename().string());
    puzzle.context_panels.push_back(panel.string());
  }
  for (int i = 0; i < 8; ++i) {
    auto panel = dir / ("candidate_" + std::to_string(i) + ".png");
    if (!std::filesystem::exists(panel))
      throw LayoutError("puzzle " + puzzle.id + ": missing " + panel.filename().string());
    puzzle.candidate_panels.push_back(panel.string());
  }
  auto answer_path = dir / "answer.txt";
  if (!std::filesystem::exists(answer_path))
    throw LayoutError("puzzle " + puzzle.id + ": missing answer.txt");
  try {
    puzzle.gold_index = std::stoi(util::trim(util::read_file(answer_path)));
  } catch (const std::exception&) {
    throw LayoutError("puzzle " + puzzle.id + ": answer.txt is not an integer");
  }
  puzzle.validate();
  return puzzle;
}

}  // namespace

std::vector<RavenPuzzle> load_raven(const std::filesystem::path& root,
                                    const std::optional<std::set<RavenCategory>>& filter) {
  if (!std::filesystem::is_directory(root))
    throw LayoutError("i-RAVEN root not found: " + root.string());
  std::vector<RavenPuzzle> puzzles;
  std::vector<std::filesystem::path> category_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory()) category_dirs.push_back(entry.path());
  }
  std::sort(category_dirs.begin(), category_dirs.end());
  for (const auto& category_dir : category_dirs) {
    auto name = category_dir.filename().string();
    if (name.starts_with(".")) continue;
    RavenCategory category = raven_category_from_string(name);
    if (filter && !filter->count(category)) continue;
    std::vector<std::filesystem::path> puzzle_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(category_dir)) {
      if (entry.is_directory()) puzzle_dirs.push_back(entry.path());
    }
    std::sort(puzzle_dirs.begin(), puzzle_dirs.end());
    for (const auto& puzzle_dir : puzzle_dirs) {
      puzzles.push_back(load_puzzle(puzzle_dir, category));
    }
  }
  return puzzles;
}

}  // namespace vcot
