#pragma once

#include <filesystem>
#include <vector>

#include "avseld/geometry.hpp"
#include "avseld/visual_features.hpp"

namespace avseld {

// A dense keypoint timeline for one clip: exactly one frame per 100 ms
// label step, frames[t].time_index == t throughout.
struct KeypointDocument {
  int frame_count = 0;
  PanoramaSpec panorama;
  std::vector<KeypointFrame> frames;
};

// Strict versioned JSON. Unknown keys, unknown keypoint kinds, out-of-range
// pixel coordinates, confidences outside [0, 1], and sparse or reordered
// timelines are all rejected with the offending key path in the message.
KeypointDocument read_keypoint_document(const std::filesystem::path& path);

// Canonical form: frames in time order, observations sorted by
// (person_id, kind). Reading back a written document reproduces it exactly.
void write_keypoint_document(const KeypointDocument& doc,
                             const std::filesystem::path& path);

}  // namespace avseld
