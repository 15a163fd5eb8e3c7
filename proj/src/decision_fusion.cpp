#include "avseld/decision_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

void check_config(const FusionConfig& cfg) {
  if (!(cfg.sigma_deg > 0.0 && cfg.sigma_deg <= 180.0)) {
    throw validation_error("fusion sigma must be in (0, 180]");
  }
  if (!(cfg.min_confidence >= 0.0 && cfg.min_confidence <= 1.0)) {
    throw validation_error("fusion min_confidence must be in [0, 1]");
  }
}

// Nearest allowed keypoint direction for one active class, or nothing when no
// candidate lies strictly inside sigma. Equidistant candidates resolve to the
// lowest (person_id, kind) pair so fusion is order-independent.
std::optional<CartesianDoa> best_correction(const CartesianDoa& pred_dir, int class_index,
                                            const KeypointFrame& keypoints,
                                            const ClassKeypointMap& map,
                                            const FusionConfig& cfg, const PanoramaSpec& spec) {
  bool found = false;
  double best_dist = 0.0;
  int best_person = 0;
  KeypointKind best_kind = KeypointKind::mouth;
  std::optional<CartesianDoa> best_dir;
  for (const KeypointObservation& obs : keypoints.observations) {
    if (!map.allows(class_index, obs.kind)) continue;
    if (obs.confidence < cfg.min_confidence) continue;
    const CartesianDoa dir = spherical_to_cartesian(pixel_to_spherical(obs.position, spec));
    const double dist = angular_distance_deg(pred_dir, dir);
    const bool better =
        !found || dist < best_dist ||
        (dist == best_dist && (obs.person_id < best_person ||
                               (obs.person_id == best_person && obs.kind < best_kind)));
    if (better) {
      found = true;
      best_dist = dist;
      best_person = obs.person_id;
      best_kind = obs.kind;
      best_dir = dir;
    }
  }
  if (!found || !(best_dist < cfg.sigma_deg)) return std::nullopt;
  return best_dir;
}

}  // namespace

bool ClassKeypointMap::allows(int class_index, KeypointKind kind) const {
  if (class_index < 0 || class_index >= kNumClasses) return false;
  const std::vector<KeypointKind>& kinds = allowed[class_index];
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

ClassKeypointMap default_class_keypoint_map() {
  ClassKeypointMap map;
  // femaleSpeech, maleSpeech, clapping, laughter
  for (int cls : {0, 1, 2, 4}) map.allowed[cls] = {KeypointKind::mouth};
  // waterTap
  map.allowed[10] = {KeypointKind::left_hand, KeypointKind::right_hand};
  // footsteps
  map.allowed[6] = {KeypointKind::left_foot, KeypointKind::right_foot};
  return map;
}

FramePredictions fuse_frame(const FramePredictions& preds, const KeypointFrame& keypoints,
                            const ClassKeypointMap& map, const FusionConfig& cfg,
                            const PanoramaSpec& spec) {
  check_config(cfg);
  if (preds.time_index != keypoints.time_index) {
    throw validation_error("predictions at frame " + std::to_string(preds.time_index) +
                           " paired with keypoints at frame " +
                           std::to_string(keypoints.time_index));
  }
  if (preds.activity.size() != preds.doa.size()) {
    throw validation_error("activity and DOA arrays have different class counts");
  }
  FramePredictions out = preds;
  for (std::size_t k = 0; k < preds.activity.size(); ++k) {
    if (!(preds.activity[k] > 0.5)) continue;
    const std::array<double, 3>& d = preds.doa[k];
    const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(norm > 1e-12)) continue;  // degenerate prediction, nothing to compare
    const CartesianDoa pred_dir(d[0], d[1], d[2]);
    const std::optional<CartesianDoa> corrected =
        best_correction(pred_dir, static_cast<int>(k), keypoints, map, cfg, spec);
    if (corrected) {
      out.doa[k] = {corrected->x(), corrected->y(), corrected->z()};
    }
  }
  return out;
}

std::vector<FramePredictions> fuse_clip(const std::vector<FramePredictions>& preds,
                                        const std::vector<KeypointFrame>& keypoints,
                                        const ClassKeypointMap& map, const FusionConfig& cfg,
                                        const PanoramaSpec& spec) {
  if (preds.size() != keypoints.size()) {
    throw validation_error("prediction and keypoint timelines have different lengths");
  }
  std::vector<FramePredictions> out;
  out.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out.push_back(fuse_frame(preds[i], keypoints[i], map, cfg, spec));
  }
  return out;
}

std::vector<EventAnnotation> fuse_events(const std::vector<EventAnnotation>& events,
                                         const std::vector<KeypointFrame>& keypoints,
                                         const ClassKeypointMap& map, const FusionConfig& cfg,
                                         const PanoramaSpec& spec) {
  check_config(cfg);
  std::vector<EventAnnotation> out;
  out.reserve(events.size());
  for (const EventAnnotation& e : events) {
    EventAnnotation m = e;
    if (e.frame_index >= 0 && e.frame_index < static_cast<int>(keypoints.size())) {
      const KeypointFrame& kf = keypoints[e.frame_index];
      if (kf.time_index != e.frame_index) {
        throw validation_error("keypoint timeline is not dense at frame " +
                               std::to_string(e.frame_index));
      }
      const CartesianDoa pred_dir = spherical_to_cartesian(e.doa);
      const std::optional<CartesianDoa> corrected =
          best_correction(pred_dir, e.class_index, kf, map, cfg, spec);
      if (corrected) m.doa = cartesian_to_spherical(*corrected);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace avseld
