#pragma once

#include <array>
#include <vector>

#include "avseld/annotations.hpp"
#include "avseld/geometry.hpp"
#include "avseld/visual_features.hpp"

namespace avseld {

// Which keypoint kinds may correct the DOA of each class. Empty means the
// class is never touched.
struct ClassKeypointMap {
  std::array<std::vector<KeypointKind>, kNumClasses> allowed;

  bool allows(int class_index, KeypointKind kind) const;
};

// Mouth for the speech-like classes (female/male speech, clapping, laughter),
// hands for the water tap, feet for footsteps.
ClassKeypointMap default_class_keypoint_map();

struct FusionConfig {
  double sigma_deg = 30.0;       // replacement radius, in (0, 180]
  double min_confidence = 0.0;   // keypoints below this are ignored
};

// Dense per-frame predictions: activity probability and raw DOA vector per
// class. A class is treated as active when its probability exceeds 0.5.
struct FramePredictions {
  int time_index = 0;
  std::vector<double> activity;
  std::vector<std::array<double, 3>> doa;
};

// For every active, mapped class: find the nearest allowed keypoint direction
// (ties broken by lowest person_id, then kind order) and replace the DOA if
// that distance is strictly below sigma. Activity is never modified.
FramePredictions fuse_frame(const FramePredictions& preds, const KeypointFrame& keypoints,
                            const ClassKeypointMap& map, const FusionConfig& cfg,
                            const PanoramaSpec& spec);

// Frame-wise fusion over a clip; predictions and keypoints must align on
// time_index pairwise.
std::vector<FramePredictions> fuse_clip(const std::vector<FramePredictions>& preds,
                                        const std::vector<KeypointFrame>& keypoints,
                                        const ClassKeypointMap& map, const FusionConfig& cfg,
                                        const PanoramaSpec& spec);

// Same rule applied to event rows (the file-level format). Events whose frame
// has no keypoint entry pass through unchanged.
std::vector<EventAnnotation> fuse_events(const std::vector<EventAnnotation>& events,
                                         const std::vector<KeypointFrame>& keypoints,
                                         const ClassKeypointMap& map, const FusionConfig& cfg,
                                         const PanoramaSpec& spec);

}  // namespace avseld
