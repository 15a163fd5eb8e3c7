#include "avseld/augmentation.hpp"

#include <string>

#include "avseld/errors.hpp"
#include "avseld/random.hpp"

namespace avseld {

std::vector<KeypointFrame> transform_keypoints(const SpatialTransform& t,
                                               const std::vector<KeypointFrame>& frames,
                                               const PanoramaSpec& spec) {
  std::vector<KeypointFrame> out;
  out.reserve(frames.size());
  for (const KeypointFrame& frame : frames) {
    KeypointFrame m = frame;
    for (KeypointObservation& obs : m.observations) {
      obs.position = transform_pixel(t, obs.position, spec);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<AvClipPair> acs_vps_expand(const AvClipPair& pair, const AcsSet& set) {
  validate_acs_set(set);
  std::vector<AvClipPair> out;
  out.reserve(set.transforms.size());
  for (const SpatialTransform& t : set.transforms) {
    AvClipPair m;
    m.clip_id = pair.clip_id + "_" + transform_name(t);
    m.panorama = pair.panorama;
    m.audio = transform_foa(t, pair.audio);
    m.keypoints = transform_keypoints(t, pair.keypoints, pair.panorama);
    m.annotations = transform_annotations(t, pair.annotations);
    out.push_back(std::move(m));
  }
  return out;
}

MixupResult mixup(std::span<const float> features_a, std::span<const float> features_b,
                  const SeldTargets& targets_a, const SeldTargets& targets_b,
                  const MixupParams& params) {
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) {
    throw validation_error("mixup lambda must be in [0, 1]");
  }
  if (features_a.size() != features_b.size()) {
    throw validation_error("mixup feature tensors have different sizes");
  }
  if (targets_a.frames != targets_b.frames || targets_a.classes != targets_b.classes) {
    throw validation_error("mixup targets have different shapes");
  }
  const double l = params.lambda;
  MixupResult r;
  r.features.resize(features_a.size());
  for (std::size_t i = 0; i < features_a.size(); ++i) {
    r.features[i] = static_cast<float>(l * features_a[i] + (1.0 - l) * features_b[i]);
  }
  r.targets.frames = targets_a.frames;
  r.targets.classes = targets_a.classes;
  r.targets.activity.resize(targets_a.activity.size());
  r.targets.doa.resize(targets_a.doa.size());
  for (std::size_t i = 0; i < targets_a.activity.size(); ++i) {
    r.targets.activity[i] = l * targets_a.activity[i] + (1.0 - l) * targets_b.activity[i];
  }
  for (std::size_t i = 0; i < targets_a.doa.size(); ++i) {
    r.targets.doa[i] = l * targets_a.doa[i] + (1.0 - l) * targets_b.doa[i];
  }
  return r;
}

double sample_mixup_lambda(std::mt19937_64& rng) { return sample_beta_half(rng); }

}  // namespace avseld
