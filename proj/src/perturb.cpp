#include "vcot/perturb.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "vcot/errors.hpp"
#include "vcot/util.hpp"

namespace vcot {

const std::string& DonorMap::donor_of(const std::string& sample_id) const {
  auto it = assignment.find(sample_id);
  if (it == assignment.end())
    throw KeyMismatchError("donor map has no entry for sample " + sample_id);
  return it->second;
}

void DonorMap::validate() const {
  std::set<std::string> donors;
  for (const auto& [id, donor] : assignment) {
    if (id == donor) throw ValidationError("donor map: " + id + " maps to itself");
    if (!assignment.count(donor))
      throw ValidationError("donor map: donor " + donor + " is not in the id set");
    if (!donors.insert(donor).second)
      throw ValidationError("donor map: " + donor + " donates more than once");
  }
}

nlohmann::json DonorMap::to_json() const {
  return nlohmann::json{{"seed", seed}, {"assignment", assignment}};
}

DonorMap DonorMap::from_json(const nlohmann::json& j) {
  DonorMap m;
  m.seed = j.at("seed").get<long long>();
  m.assignment = j.at("assignment").get<std::map<std::string, std::string>>();
  m.validate();
  return m;
}

DonorMap make_donor_map(const std::vector<std::string>& sample_ids, long long seed) {
  std::set<std::string> unique(sample_ids.begin(), sample_ids.end());
  if (unique.size() != sample_ids.size())
    throw ValidationError("donor map: duplicate sample ids");
  if (sample_ids.size() < 2)
    throw TooFewSamplesError("donor map needs at least 2 samples, got " +
                             std::to_string(sample_ids.size()));

  std::vector<std::string> ids(unique.begin(), unique.end());  // sorted
  std::vector<std::size_t> perm(ids.size());
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));

  // Expected number of attempts is e; the bound only guards against a broken
  // RNG turning this into an infinite loop.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    util::seeded_shuffle(perm, rng);
    bool deranged = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (perm[i] == i) {
        deranged = false;
        break;
      }
    }
    if (!deranged) continue;
    DonorMap map;
    map.seed = seed;
    for (std::size_t i = 0; i < ids.size(); ++i) map.assignment[ids[i]] = ids[perm[i]];
    map.validate();
    return map;
  }
  throw Error("donor map: no derangement found after 10000 shuffles");
}

VideoSample visual_shuffle(const VideoSample& sample, const VideoSample& donor) {
  if (donor.frames.size() != sample.frames.size())
    throw FrameCountMismatchError("visual shuffle: sample " + sample.id + " has " +
                                  std::to_string(sample.frames.size()) + " frames, donor " +
                                  donor.id + " has " + std::to_string(donor.frames.size()));
  VideoSample out = sample;
  out.frames = donor.frames;
  return out;
}

InfillChain text_shuffle(const VideoSample& sample, const InfillChain& own_chain,
                         const InfillChain& donor_chain) {
  if (own_chain.sample_id != sample.id)
    throw KeyMismatchError("text shuffle: chain " + own_chain.sample_id +
                           " does not belong to sample " + sample.id);
  if (donor_chain.kind != own_chain.kind)
    throw KindMismatchError("text shuffle: chain kinds differ (" + to_string(own_chain.kind) +
                            " vs " + to_string(donor_chain.kind) + ")");
  if (donor_chain.size() != own_chain.size())
    throw ChainLengthMismatchError("text shuffle: chain lengths differ (" +
                                   std::to_string(own_chain.size()) + " vs " +
                                   std::to_string(donor_chain.size()) + ")");
  InfillChain out = donor_chain;
  out.sample_id = sample.id;
  return out;
}

void save_donor_map(const std::filesystem::path& run_dir, const DonorMap& map) {
  std::filesystem::create_directories(run_dir);
  util::atomic_write_file(run_dir / "donor_map.json", map.to_json().dump(2) + "\n");
}

DonorMap load_donor_map(const std::filesystem::path& run_dir) {
  auto path = run_dir / "donor_map.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("donor map " + path.string() + ": " + e.what());
  }
  return DonorMap::from_json(j);
}

}  // namespace vcot
