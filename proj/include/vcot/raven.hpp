#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vcot {

enum class RavenCategory {
  center,
  dist_4,
  dist_9,
  in_out,
  indist4_out,
  left_right,
  up_down,
};

inline constexpr std::array<RavenCategory, 7> kRavenCategories = {
    RavenCategory::center,      RavenCategory::dist_4,     RavenCategory::dist_9,
    RavenCategory::in_out,      RavenCategory::indist4_out, RavenCategory::left_right,
    RavenCategory::up_down,
};

std::string to_string(RavenCategory c);
/// Accepts the seven column labels plus the canonical puzzle-set directory
/// names (center_single, distribute_four, ...). Throws UnknownCategoryError.
RavenCategory raven_category_from_string(const std::string& s);

struct RavenPuzzle {
  std::string id;  // "<category>/<puzzle_id>"
  RavenCategory category = RavenCategory::center;
  std::vector<std::string> context_panels;    // 8 ordered image paths
  std::vector<std::string> candidate_panels;  // 8 ordered image paths
  int gold_index = 0;                         // in [0, 8)

  void validate() const;
};

/// Scans <root>/<category>/<puzzle_id>/ for context_0..7.png,
/// candidate_0..7.png and answer.txt. Throws LayoutError on missing pieces.
std::vector<RavenPuzzle> load_raven(const std::filesystem::path& root,
                                    const std::optional<std::set<RavenCategory>>& filter = {});

}  // namespace vcot
