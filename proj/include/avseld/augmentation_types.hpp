#pragma once

#include <string>
#include <vector>

#include "avseld/annotations.hpp"
#include "avseld/foa_clip.hpp"
#include "avseld/geometry.hpp"
#include "avseld/visual_features.hpp"

namespace avseld {

// One audio-visual training example: FOA audio, the keypoint track of the
// matching panorama video, and frame-wise event annotations, all on a shared
// 100 ms timeline.
struct AvClipPair {
  std::string clip_id;
  FoaClip audio;
  PanoramaSpec panorama;
  std::vector<KeypointFrame> keypoints;  // dense, one entry per 100 ms frame
  std::vector<EventAnnotation> annotations;
};

}  // namespace avseld
