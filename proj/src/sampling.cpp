#include "vcot/sampling.hpp"

#include <cmath>

#include "vcot/errors.hpp"

namespace vcot {

std::vector<int> sample_frame_indices(int total, const SamplingSpec& spec) {
  spec.validate();
  if (total < spec.count)
    throw InsufficientFramesError("need " + std::to_string(spec.count) + " frames, have " +
                                  std::to_string(total));
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(spec.count));
  const double denom = static_cast<double>(spec.count - 1) * spec.stride;
  for (int k = 0; k < spec.count; ++k) {
    auto idx = static_cast<int>(std::llround(k * static_cast<double>(total - 1) / denom));
    if (!indices.empty() && idx <= indices.back())
      throw InsufficientFramesError("stride " + std::to_string(spec.stride) +
                                    " collapses sampled indices for " + std::to_string(total) +
                                    " frames");
    indices.push_back(idx);
  }
  return indices;
}

std::vector<FrameRef> sample_frames(const std::string& sample_id,
                                    const std::vector<std::string>& available,
                                    const SamplingSpec& spec) {
  auto indices = sample_frame_indices(static_cast<int>(available.size()), spec);
  std::vector<FrameRef> frames;
  frames.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    frames.push_back(FrameRef{sample_id, static_cast<int>(k),
                              available[static_cast<std::size_t>(indices[k])], indices[k]});
  }
  return frames;
}

}  // namespace vcot
