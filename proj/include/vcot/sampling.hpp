#pragma once

#include <string>
#include <vector>

#include "vcot/types.hpp"

namespace vcot {

/// Source indices for sampling `spec.count` frames out of `total` available.
/// index_k = round(k * (total-1) / ((count-1) * stride)), rounded half away
/// from zero; stride 1 spans the clip uniformly, stride > 1 compresses the
/// window toward the clip start. Throws InsufficientFramesError when total
/// < count or when rounding collapses two indices.
std::vector<int> sample_frame_indices(int total, const SamplingSpec& spec);

/// Same selection, materialized as FrameRefs over the available paths.
std::vector<FrameRef> sample_frames(const std::string& sample_id,
                                    const std::vector<std::string>& available,
                                    const SamplingSpec& spec);

}  // namespace vcot
