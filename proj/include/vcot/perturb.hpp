#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcot/types.hpp"

namespace vcot {

// Deranged donor assignment: every sample receives material from exactly one
// other sample and never from itself.
struct DonorMap {
  long long seed = 0;
  std::map<std::string, std::string> assignment;

  const std::string& donor_of(const std::string& sample_id) const;
  void validate() const;
  nlohmann::json to_json() const;
  static DonorMap from_json(const nlohmann::json& j);
};

// Seeded derangement over the id set. Deterministic across platforms for a
// given (ids, seed): ids are sorted, shuffled with an explicitly specified
// algorithm, and reshuffled until no id maps to itself.
DonorMap make_donor_map(const std::vector<std::string>& sample_ids, long long seed);

// Foreign frames, own text: the returned sample keeps everything but its
// frames, which are replaced by the donor's in donor order.
VideoSample visual_shuffle(const VideoSample& sample, const VideoSample& donor);

// Own frames, foreign text: returns the donor's chain re-tagged with the
// sample's id so downstream assembly pairs it with the original frames.
InfillChain text_shuffle(const VideoSample& sample, const InfillChain& own_chain,
                         const InfillChain& donor_chain);

void save_donor_map(const std::filesystem::path& run_dir, const DonorMap& map);
DonorMap load_donor_map(const std::filesystem::path& run_dir);

}  // namespace vcot
