#include <string>

#include "lvc/error.hpp"
#include "lvc/pipeline.hpp"

namespace lvc {

SamplingPlan sample_frame_indices(std::size_t total_frames, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidConfig, "sampled frame count must be positive");
  if (total_frames < count) {
    throw Error(ErrorCode::InsufficientFrames, "cannot sample " + std::to_string(count) +
                                                   " frames from " + std::to_string(total_frames));
  }
  SamplingPlan plan{total_frames, {}};
  plan.indices.reserve(count);
  // floor((j + 1/2) * total / count) in exact integer arithmetic.
  for (std::size_t j = 0; j < count; ++j) {
    plan.indices.push_back((2 * j + 1) * total_frames / (2 * count));
  }
  return plan;
}

}  // namespace lvc
