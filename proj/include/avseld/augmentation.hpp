#pragma once

#include <random>
#include <span>
#include <vector>

#include "avseld/augmentation_types.hpp"
#include "avseld/losses.hpp"
#include "avseld/spatial_transforms.hpp"

namespace avseld {

// Maps every observation pixel through transform_pixel; ids, kinds and
// confidences are untouched.
std::vector<KeypointFrame> transform_keypoints(const SpatialTransform& t,
                                               const std::vector<KeypointFrame>& frames,
                                               const PanoramaSpec& spec);

// Joint audio-channel-swap / video-pixel-swap expansion: one output pair per
// transform in the set, in set order, with "_<transform name>" appended to
// the clip id. Audio, keypoints and annotations move together, so every
// output is a coherent training example.
std::vector<AvClipPair> acs_vps_expand(const AvClipPair& pair, const AcsSet& set);

struct MixupParams {
  double lambda = 0.5;  // in [0, 1]
};

struct MixupResult {
  std::vector<float> features;
  SeldTargets targets;
};

// Convex feature/target blend: lambda * a + (1 - lambda) * b, elementwise,
// with activity and DOA targets mixed by the same lambda.
MixupResult mixup(std::span<const float> features_a, std::span<const float> features_b,
                  const SeldTargets& targets_a, const SeldTargets& targets_b,
                  const MixupParams& params);

// Beta(1/2, 1/2) mixing weight.
double sample_mixup_lambda(std::mt19937_64& rng);

}  // namespace avseld
