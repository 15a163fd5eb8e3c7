#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "avseld/audio_features.hpp"
#include "avseld/errors.hpp"
#include "avseld/random.hpp"
#include "avseld/spatial_transforms.hpp"
#include "avseld/visual_features.hpp"

using namespace avseld;

namespace {

KeypointObservation mouth_at(int person, int u, int v, double conf = 1.0) {
  KeypointObservation o;
  o.person_id = person;
  o.kind = KeypointKind::mouth;
  o.position = PixelCoord{u, v};
  o.confidence = conf;
  return o;
}

std::vector<KeypointFrame> empty_timeline(int n = kVisualFrames) {
  std::vector<KeypointFrame> frames(n);
  for (int i = 0; i < n; ++i) frames[i].time_index = i;
  return frames;
}

}  // namespace

TEST_CASE("keypoint kind names round-trip") {
  for (int i = 0; i < kNumKeypointKinds; ++i) {
    const auto kind = static_cast<KeypointKind>(i);
    CHECK(parse_keypoint_kind(keypoint_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_keypoint_kind("elbow"), data_error);
}

TEST_CASE("gaussian encoding matches the closed form") {
  const PanoramaSpec spec;  // 1920 x 960
  const GaussianPair g = encode_gaussian(PixelCoord{960, 480}, spec);
  const double ch = (960 + 0.5) * 64.0 / 1920.0;
  const double cv = (480 + 0.5) * 64.0 / 960.0;
  for (int i = 0; i < kAxisBins; ++i) {
    const double dh = i - ch;
    const double dv = i - cv;
    REQUIRE(g.horizontal[i] ==
            doctest::Approx(std::exp(-dh * dh / (2.0 * 2.56 * 2.56))).epsilon(1e-12));
    REQUIRE(g.vertical[i] ==
            doctest::Approx(std::exp(-dv * dv / (2.0 * 5.12 * 5.12))).epsilon(1e-12));
  }
}

TEST_CASE("gaussian values live in (0, 1] and peak at the projected center") {
  const PanoramaSpec spec(640, 320);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const PixelCoord p{uniform_int(rng, 0, 639), uniform_int(rng, 0, 319)};
    const GaussianPair g = encode_gaussian(p, spec);
    const double ch = (p.u + 0.5) * 64.0 / 640.0;
    int peak = 0;
    for (int i = 0; i < kAxisBins; ++i) {
      CHECK(g.horizontal[i] > 0.0);
      CHECK(g.horizontal[i] <= 1.0);
      CHECK(g.vertical[i] > 0.0);
      CHECK(g.vertical[i] <= 1.0);
      if (g.horizontal[i] > g.horizontal[peak]) peak = i;
    }
    const int nearest = static_cast<int>(
        std::min(63L, std::max(0L, std::lround(ch))));
    CHECK(peak == nearest);
    // strictly decaying away from the peak on both sides
    for (int i = peak + 1; i < kAxisBins; ++i) CHECK(g.horizontal[i] < g.horizontal[i - 1]);
    for (int i = peak - 1; i >= 0; --i) CHECK(g.horizontal[i] < g.horizontal[i + 1]);
  }
}

TEST_CASE("gaussian width and bounds validation") {
  const PanoramaSpec spec;
  VisualEncodingConfig too_narrow;
  too_narrow.sigma_h_frac = 0.007;  // 0.45 bins
  CHECK_THROWS_AS(encode_gaussian(PixelCoord{0, 0}, spec, too_narrow), validation_error);
  CHECK_THROWS_AS(encode_gaussian(PixelCoord{1920, 0}, spec), validation_error);
  CHECK_THROWS_AS(encode_gaussian(PixelCoord{0, -1}, spec), validation_error);
}

TEST_CASE("elevation flip mirrors the vertical center") {
  const PanoramaSpec spec(256, 128);
  const SpatialTransform eflip{0, false, true};
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const PixelCoord p{uniform_int(rng, 0, 255), uniform_int(rng, 0, 127)};
    const PixelCoord q = transform_pixel(eflip, p, spec);
    const GaussianPair g = encode_gaussian(q, spec);
    const double c_orig = (p.v + 0.5) * 64.0 / 128.0;
    const double c_flip = 64.0 - c_orig;
    for (int i = 0; i < kAxisBins; ++i) {
      const double d = i - c_flip;
      REQUIRE(g.vertical[i] ==
              doctest::Approx(std::exp(-d * d / (2.0 * 5.12 * 5.12))).epsilon(1e-12));
    }
    // horizontal untouched by a pure elevation flip
    const GaussianPair g0 = encode_gaussian(p, spec);
    for (int i = 0; i < kAxisBins; ++i) REQUIRE(g.horizontal[i] == g0.horizontal[i]);
  }
}

TEST_CASE("visual tensor shape and dense-timeline validation") {
  const PanoramaSpec spec;
  const VisualFeature feat = assemble_visual_features(empty_timeline(), spec);
  CHECK(feat.frames == 100);
  CHECK(feat.persons == 6);
  CHECK(feat.axes == 2);
  CHECK(feat.bins == 64);
  CHECK(feat.data.size() == 100u * 6u * 2u * 64u);
  for (const float v : feat.data) REQUIRE(v == 0.0f);

  CHECK_THROWS_AS(assemble_visual_features(empty_timeline(99), spec), validation_error);
  auto shuffled = empty_timeline();
  std::swap(shuffled[3].time_index, shuffled[4].time_index);
  CHECK_THROWS_AS(assemble_visual_features(shuffled, spec), validation_error);
}

TEST_CASE("person slots fill by confidence then id, capped at six") {
  const PanoramaSpec spec;
  auto frames = empty_timeline();
  // 8 mouths in frame 10; two share confidence 0.5
  const int us[8] = {100, 200, 300, 400, 500, 600, 700, 800};
  const double confs[8] = {0.3, 0.9, 0.5, 0.5, 0.8, 0.2, 0.7, 0.6};
  for (int p = 0; p < 8; ++p) {
    frames[10].observations.push_back(mouth_at(p, us[p], 480, confs[p]));
  }
  // and a high-confidence hand that must be ignored
  KeypointObservation hand;
  hand.person_id = 0;
  hand.kind = KeypointKind::left_hand;
  hand.position = PixelCoord{50, 50};
  hand.confidence = 1.0;
  frames[10].observations.push_back(hand);

  const VisualFeature feat = assemble_visual_features(frames, spec);
  // expected slot order: conf desc, id asc on ties -> persons 1,4,6,7,2,3
  const int expected_person[6] = {1, 4, 6, 7, 2, 3};
  for (int slot = 0; slot < 6; ++slot) {
    const GaussianPair g =
        encode_gaussian(PixelCoord{us[expected_person[slot]], 480}, spec);
    for (int b = 0; b < 64; ++b) {
      REQUIRE(feat.at(10, slot, 0, b) == static_cast<float>(g.horizontal[b]));
      REQUIRE(feat.at(10, slot, 1, b) == static_cast<float>(g.vertical[b]));
    }
  }
  // other frames stay zero
  for (int b = 0; b < 64; ++b) REQUIRE(feat.at(11, 0, 0, b) == 0.0f);
}

TEST_CASE("fusion stacks audio under five-fold repeated visual channels") {
  const PanoramaSpec spec;
  auto frames = empty_timeline();
  frames[7].observations.push_back(mouth_at(0, 333, 222, 1.0));
  const VisualFeature visual = assemble_visual_features(frames, spec);

  AudioFeature audio;
  audio.frames = 500;
  audio.channels = 7;
  audio.bands = 64;
  audio.data.resize(500u * 7u * 64u);
  std::mt19937_64 rng(25);
  for (auto& v : audio.data) v = static_cast<float>(uniform_in(rng, -1.0, 1.0));

  const FusedFeature fused = upsample_and_fuse(visual, audio);
  CHECK(fused.frames == 500);
  CHECK(fused.channels == 19);
  CHECK(fused.bands == 64);

  std::mt19937_64 pick(26);
  for (int i = 0; i < 500; ++i) {
    const int f = uniform_int(pick, 0, 499);
    const int b = uniform_int(pick, 0, 63);
    const int c = uniform_int(pick, 0, 18);
    if (c < 7) {
      REQUIRE(fused.at(f, c, b) == audio.at(f, c, b));
    } else {
      const int person = (c - 7) / 2;
      const int axis = (c - 7) % 2;
      REQUIRE(fused.at(f, c, b) == visual.at(f / 5, person, axis, b));
    }
  }
  // the mouth appears in visual frame 7 -> audio frames 35..39 inclusive
  CHECK(fused.at(35, 7, 11) == visual.at(7, 0, 0, 11));
  CHECK(fused.at(39, 7, 11) == visual.at(7, 0, 0, 11));
  CHECK(fused.at(34, 7, 11) == 0.0f);
  CHECK(fused.at(40, 7, 11) == 0.0f);
}

TEST_CASE("fusion rejects mismatched frame counts") {
  const PanoramaSpec spec;
  const VisualFeature visual = assemble_visual_features(empty_timeline(), spec);
  AudioFeature audio;
  audio.frames = 499;  // not 5 x 100
  audio.channels = 7;
  audio.bands = 64;
  audio.data.resize(499u * 7u * 64u, 0.0f);
  CHECK_THROWS_AS(upsample_and_fuse(visual, audio), validation_error);
}
