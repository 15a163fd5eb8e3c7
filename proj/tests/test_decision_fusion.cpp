#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "avseld/decision_fusion.hpp"
#include "avseld/errors.hpp"
#include "avseld/random.hpp"

using namespace avseld;

namespace {

constexpr int kClasses = kNumClasses;

FramePredictions frame_with(int t, int class_index, double activity,
                            std::array<double, 3> doa) {
  FramePredictions p;
  p.time_index = t;
  p.activity.assign(kClasses, 0.0);
  p.doa.assign(kClasses, {0.0, 0.0, 0.0});
  p.activity[class_index] = activity;
  p.doa[class_index] = doa;
  return p;
}

KeypointObservation obs_at(int person, KeypointKind kind, PixelCoord px, double conf = 1.0) {
  KeypointObservation o;
  o.person_id = person;
  o.kind = kind;
  o.position = px;
  o.confidence = conf;
  return o;
}

std::array<double, 3> dir_of_pixel(PixelCoord px, const PanoramaSpec& spec) {
  const CartesianDoa d = spherical_to_cartesian(pixel_to_spherical(px, spec));
  return {d.x(), d.y(), d.z()};
}

// Unoptimized restatement of the fusion rule, evaluated candidate-by-candidate.
FramePredictions fuse_frame_oracle(const FramePredictions& preds, const KeypointFrame& kps,
                                   const ClassKeypointMap& map, const FusionConfig& cfg,
                                   const PanoramaSpec& spec) {
  FramePredictions out = preds;
  for (int k = 0; k < static_cast<int>(preds.activity.size()); ++k) {
    if (!(preds.activity[k] > 0.5)) continue;
    const auto& d = preds.doa[k];
    const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(norm > 1e-12)) continue;
    const CartesianDoa pred_dir(d[0], d[1], d[2]);
    struct Candidate {
      double dist;
      int person;
      int kind;
      CartesianDoa dir;
    };
    std::optional<Candidate> best;
    for (const KeypointObservation& o : kps.observations) {
      if (!map.allows(k, o.kind)) continue;
      if (o.confidence < cfg.min_confidence) continue;
      const CartesianDoa dir = spherical_to_cartesian(pixel_to_spherical(o.position, spec));
      const Candidate c{angular_distance_deg(pred_dir, dir), o.person_id,
                        static_cast<int>(o.kind), dir};
      if (!best || c.dist < best->dist ||
          (c.dist == best->dist &&
           (c.person < best->person || (c.person == best->person && c.kind < best->kind)))) {
        best = c;
      }
    }
    if (best && best->dist < cfg.sigma_deg) {
      out.doa[k] = {best->dir.x(), best->dir.y(), best->dir.z()};
    }
  }
  return out;
}

}  // namespace

TEST_CASE("default class-keypoint map wires speech to mouths, taps to hands, steps to feet") {
  const ClassKeypointMap map = default_class_keypoint_map();
  for (int cls : {0, 1, 2, 4}) {
    CHECK(map.allows(cls, KeypointKind::mouth));
    CHECK_FALSE(map.allows(cls, KeypointKind::left_hand));
    CHECK_FALSE(map.allows(cls, KeypointKind::left_foot));
  }
  CHECK(map.allows(10, KeypointKind::left_hand));
  CHECK(map.allows(10, KeypointKind::right_hand));
  CHECK_FALSE(map.allows(10, KeypointKind::mouth));
  CHECK(map.allows(6, KeypointKind::left_foot));
  CHECK(map.allows(6, KeypointKind::right_foot));
  CHECK_FALSE(map.allows(6, KeypointKind::mouth));
  for (int cls : {3, 5, 7, 8, 9, 11, 12}) {
    for (int kind = 0; kind < kNumKeypointKinds; ++kind) {
      CHECK_FALSE(map.allows(cls, static_cast<KeypointKind>(kind)));
    }
  }
  CHECK_FALSE(map.allows(-1, KeypointKind::mouth));
  CHECK_FALSE(map.allows(kClasses, KeypointKind::mouth));
}

TEST_CASE("a nearby mouth replaces the DOA, a distant one does not") {
  const PanoramaSpec spec;  // 1920 x 960
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;  // sigma 30

  const FramePredictions pred = frame_with(0, 0, 0.9, {1.0, 0.0, 0.0});

  KeypointFrame near_kp;
  near_kp.time_index = 0;
  const PixelCoord near_px = spherical_to_pixel(SphericalDoa(10.0, 0.0), spec);
  near_kp.observations.push_back(obs_at(0, KeypointKind::mouth, near_px));
  const FramePredictions fused = fuse_frame(pred, near_kp, map, cfg, spec);
  CHECK(fused.doa[0] == dir_of_pixel(near_px, spec));
  CHECK(fused.activity == pred.activity);

  KeypointFrame far_kp;
  far_kp.time_index = 0;
  far_kp.observations.push_back(
      obs_at(0, KeypointKind::mouth, spherical_to_pixel(SphericalDoa(40.0, 0.0), spec)));
  const FramePredictions kept = fuse_frame(pred, far_kp, map, cfg, spec);
  CHECK(kept.doa[0] == pred.doa[0]);
}

TEST_CASE("the replacement radius is a strict inequality") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FramePredictions pred = frame_with(0, 0, 1.0, {1.0, 0.0, 0.0});

  KeypointFrame kp;
  kp.time_index = 0;
  const PixelCoord px = spherical_to_pixel(SphericalDoa(10.0, 0.0), spec);
  kp.observations.push_back(obs_at(0, KeypointKind::mouth, px));
  const CartesianDoa kp_dir = spherical_to_cartesian(pixel_to_spherical(px, spec));
  const double exact = angular_distance_deg(CartesianDoa(1.0, 0.0, 0.0), kp_dir);

  FusionConfig at_boundary;
  at_boundary.sigma_deg = exact;  // not strictly below -> keep
  CHECK(fuse_frame(pred, kp, map, at_boundary, spec).doa[0] == pred.doa[0]);

  FusionConfig just_inside;
  just_inside.sigma_deg = std::nextafter(exact, 180.0);
  CHECK(fuse_frame(pred, kp, map, just_inside, spec).doa[0] == dir_of_pixel(px, spec));
}

TEST_CASE("unmapped, inactive, and degenerate predictions pass through") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;
  KeypointFrame kp;
  kp.time_index = 0;
  kp.observations.push_back(
      obs_at(0, KeypointKind::mouth, spherical_to_pixel(SphericalDoa(2.0, 0.0), spec)));

  // class 8 (music) has no keypoint mapping
  const FramePredictions unmapped = frame_with(0, 8, 0.9, {1.0, 0.0, 0.0});
  CHECK(fuse_frame(unmapped, kp, map, cfg, spec).doa[8] == unmapped.doa[8]);

  // probability at the threshold does not count as active
  const FramePredictions at_half = frame_with(0, 0, 0.5, {1.0, 0.0, 0.0});
  CHECK(fuse_frame(at_half, kp, map, cfg, spec).doa[0] == at_half.doa[0]);

  // zero-norm DOA has no direction to compare
  const FramePredictions degenerate = frame_with(0, 0, 0.9, {0.0, 0.0, 0.0});
  CHECK(fuse_frame(degenerate, kp, map, cfg, spec).doa[0] == degenerate.doa[0]);
}

TEST_CASE("activity probabilities are never modified") {
  std::mt19937_64 rng(71);
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    FramePredictions pred;
    pred.time_index = trial;
    pred.activity.resize(kClasses);
    pred.doa.resize(kClasses);
    for (int k = 0; k < kClasses; ++k) {
      pred.activity[k] = uniform_unit(rng);
      pred.doa[k] = {uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0),
                     uniform_in(rng, -1.0, 1.0)};
    }
    KeypointFrame kp;
    kp.time_index = trial;
    for (int i = 0; i < 4; ++i) {
      kp.observations.push_back(obs_at(
          i, static_cast<KeypointKind>(uniform_int(rng, 0, kNumKeypointKinds - 1)),
          PixelCoord{uniform_int(rng, 0, spec.width_px - 1),
                     uniform_int(rng, 0, spec.height_px - 1)},
          uniform_unit(rng)));
    }
    const FramePredictions fused = fuse_frame(pred, kp, map, cfg, spec);
    CHECK(fused.activity == pred.activity);
    CHECK(fused.time_index == pred.time_index);
  }
}

TEST_CASE("ties resolve to the lowest person id, then the kind order") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg{95.0, 0.0};

  // every pixel of one raster row is equidistant from the zenith
  const FramePredictions pred = frame_with(0, 0, 0.9, {0.0, 0.0, 1.0});
  KeypointFrame kp;
  kp.time_index = 0;
  kp.observations.push_back(obs_at(2, KeypointKind::mouth, PixelCoord{100, 10}));
  kp.observations.push_back(obs_at(1, KeypointKind::mouth, PixelCoord{500, 10}));
  const FramePredictions fused = fuse_frame(pred, kp, map, cfg, spec);
  CHECK(fused.doa[0] == dir_of_pixel(PixelCoord{500, 10}, spec));

  // same person: left hand precedes right hand in kind order
  const FramePredictions tap = frame_with(0, 10, 0.9, {0.0, 0.0, 1.0});
  KeypointFrame hands;
  hands.time_index = 0;
  hands.observations.push_back(obs_at(3, KeypointKind::right_hand, PixelCoord{700, 10}));
  hands.observations.push_back(obs_at(3, KeypointKind::left_hand, PixelCoord{900, 10}));
  const FramePredictions tapped = fuse_frame(tap, hands, map, cfg, spec);
  CHECK(tapped.doa[10] == dir_of_pixel(PixelCoord{900, 10}, spec));
}

TEST_CASE("low-confidence keypoints are ignored, the threshold itself is inclusive") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FramePredictions pred = frame_with(0, 0, 0.9, {1.0, 0.0, 0.0});
  const PixelCoord px = spherical_to_pixel(SphericalDoa(5.0, 0.0), spec);

  KeypointFrame kp;
  kp.time_index = 0;
  kp.observations.push_back(obs_at(0, KeypointKind::mouth, px, 0.4));

  FusionConfig cfg;
  cfg.min_confidence = 0.5;
  CHECK(fuse_frame(pred, kp, map, cfg, spec).doa[0] == pred.doa[0]);

  cfg.min_confidence = 0.4;  // equal confidence passes
  CHECK(fuse_frame(pred, kp, map, cfg, spec).doa[0] == dir_of_pixel(px, spec));
}

TEST_CASE("fusion is idempotent") {
  std::mt19937_64 rng(73);
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    FramePredictions pred;
    pred.time_index = 0;
    pred.activity.resize(kClasses);
    pred.doa.resize(kClasses);
    for (int k = 0; k < kClasses; ++k) {
      pred.activity[k] = uniform_unit(rng);
      const CartesianDoa d(uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0),
                           uniform_in(rng, -0.9, 0.9));
      pred.doa[k] = {d.x(), d.y(), d.z()};
    }
    KeypointFrame kp;
    kp.time_index = 0;
    const int n = uniform_int(rng, 0, 5);
    for (int i = 0; i < n; ++i) {
      kp.observations.push_back(obs_at(
          uniform_int(rng, 0, 3),
          static_cast<KeypointKind>(uniform_int(rng, 0, kNumKeypointKinds - 1)),
          PixelCoord{uniform_int(rng, 0, spec.width_px - 1),
                     uniform_int(rng, 0, spec.height_px - 1)},
          uniform_unit(rng)));
    }
    const FramePredictions once = fuse_frame(pred, kp, map, cfg, spec);
    const FramePredictions twice = fuse_frame(once, kp, map, cfg, spec);
    CHECK(twice.doa == once.doa);
    CHECK(twice.activity == once.activity);
  }
}

TEST_CASE("fusion agrees with a candidate-by-candidate oracle on random frames") {
  std::mt19937_64 rng(79);
  const PanoramaSpec spec{480, 240};
  const ClassKeypointMap map = default_class_keypoint_map();
  for (int trial = 0; trial < 100; ++trial) {
    FusionConfig cfg;
    cfg.sigma_deg = uniform_in(rng, 5.0, 179.0);
    cfg.min_confidence = uniform_unit(rng);
    FramePredictions pred;
    pred.time_index = trial;
    pred.activity.resize(kClasses);
    pred.doa.resize(kClasses);
    for (int k = 0; k < kClasses; ++k) {
      pred.activity[k] = uniform_unit(rng);
      if (uniform_unit(rng) < 0.1) {
        pred.doa[k] = {0.0, 0.0, 0.0};
      } else {
        pred.doa[k] = {uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0),
                       uniform_in(rng, -1.0, 1.0)};
      }
    }
    KeypointFrame kp;
    kp.time_index = trial;
    const int n = uniform_int(rng, 0, 8);
    for (int i = 0; i < n; ++i) {
      kp.observations.push_back(obs_at(
          uniform_int(rng, 0, 5),
          static_cast<KeypointKind>(uniform_int(rng, 0, kNumKeypointKinds - 1)),
          PixelCoord{uniform_int(rng, 0, spec.width_px - 1),
                     uniform_int(rng, 0, spec.height_px - 1)},
          uniform_unit(rng)));
    }
    const FramePredictions got = fuse_frame(pred, kp, map, cfg, spec);
    const FramePredictions want = fuse_frame_oracle(pred, kp, map, cfg, spec);
    CHECK(got.doa == want.doa);
    CHECK(got.activity == want.activity);
  }
}

TEST_CASE("clip fusion requires aligned timelines") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;

  std::vector<FramePredictions> preds = {frame_with(0, 0, 0.9, {1.0, 0.0, 0.0}),
                                         frame_with(1, 0, 0.9, {1.0, 0.0, 0.0})};
  std::vector<KeypointFrame> kps(2);
  kps[0].time_index = 0;
  kps[1].time_index = 1;
  CHECK(fuse_clip(preds, kps, map, cfg, spec).size() == 2);

  kps[1].time_index = 5;
  CHECK_THROWS_AS(fuse_clip(preds, kps, map, cfg, spec), validation_error);
  kps.pop_back();
  CHECK_THROWS_AS(fuse_clip(preds, kps, map, cfg, spec), validation_error);
}

TEST_CASE("event-level fusion corrects rows and passes out-of-range frames through") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FusionConfig cfg;

  std::vector<KeypointFrame> kps(3);
  for (int f = 0; f < 3; ++f) kps[f].time_index = f;
  const PixelCoord px = spherical_to_pixel(SphericalDoa(12.0, 4.0), spec);
  kps[1].observations.push_back(obs_at(0, KeypointKind::mouth, px));

  std::vector<EventAnnotation> events(3);
  events[0] = EventAnnotation{1, 0, 0, SphericalDoa(0.0, 0.0), std::nullopt};
  events[1] = EventAnnotation{1, 8, 0, SphericalDoa(0.0, 0.0), std::nullopt};  // unmapped class
  events[2] = EventAnnotation{7, 0, 0, SphericalDoa(0.0, 0.0), std::nullopt};  // past timeline

  const auto fused = fuse_events(events, kps, map, cfg, spec);
  REQUIRE(fused.size() == 3);
  const SphericalDoa want = pixel_to_spherical(px, spec);
  CHECK(fused[0].doa.azimuth_deg() == doctest::Approx(want.azimuth_deg()).epsilon(1e-9));
  CHECK(fused[0].doa.elevation_deg() == doctest::Approx(want.elevation_deg()).epsilon(1e-9));
  CHECK(fused[1].doa.azimuth_deg() == 0.0);
  CHECK(fused[2].doa.azimuth_deg() == 0.0);

  // a sparse keypoint timeline is a data defect, not a silent no-op
  std::vector<KeypointFrame> sparse = kps;
  sparse[1].time_index = 9;
  CHECK_THROWS_AS(fuse_events(events, sparse, map, cfg, spec), validation_error);
}

TEST_CASE("fusion configuration is validated") {
  const PanoramaSpec spec;
  const ClassKeypointMap map = default_class_keypoint_map();
  const FramePredictions pred = frame_with(0, 0, 0.9, {1.0, 0.0, 0.0});
  KeypointFrame kp;
  kp.time_index = 0;
  for (double sigma : {0.0, -3.0, 180.5}) {
    FusionConfig cfg;
    cfg.sigma_deg = sigma;
    CHECK_THROWS_AS(fuse_frame(pred, kp, map, cfg, spec), validation_error);
  }
  for (double conf : {-0.1, 1.1}) {
    FusionConfig cfg;
    cfg.min_confidence = conf;
    CHECK_THROWS_AS(fuse_frame(pred, kp, map, cfg, spec), validation_error);
  }
}
