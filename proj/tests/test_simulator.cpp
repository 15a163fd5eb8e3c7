#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "avseld/errors.hpp"
#include "avseld/simulator.hpp"

using namespace avseld;

namespace {

SourceTrajectory tone_source(double hz, double gain, int start, int end, SphericalDoa doa,
                             int class_index) {
  SourceTrajectory src;
  src.signal = SignalKind::tone;
  src.tone_hz = hz;
  src.gain = gain;
  src.segments.push_back(TrajectorySegment{start, end, doa, class_index});
  return src;
}

SourceTrajectory noise_source(double gain, int start, int end, SphericalDoa doa,
                              int class_index) {
  SourceTrajectory src;
  src.signal = SignalKind::noise;
  src.gain = gain;
  src.segments.push_back(TrajectorySegment{start, end, doa, class_index});
  return src;
}

double angle_between(const SphericalDoa& a, const SphericalDoa& b) {
  return angular_distance_deg(spherical_to_cartesian(a), spherical_to_cartesian(b));
}

}  // namespace

TEST_CASE("trajectory validation") {
  CHECK_THROWS_AS(simulate_clip({}, 1), validation_error);

  SourceTrajectory no_segments;
  CHECK_THROWS_AS(simulate_clip({no_segments}, 1), validation_error);

  for (double gain : {0.0, -0.5, 1.5}) {
    CHECK_THROWS_AS(
        simulate_clip({noise_source(gain, 0, 10, SphericalDoa(0, 0), 2)}, 1),
        validation_error);
  }

  // frames outside the clip
  CHECK_THROWS_AS(simulate_clip({noise_source(0.5, -1, 10, SphericalDoa(0, 0), 2)}, 1),
                  validation_error);
  CHECK_THROWS_AS(simulate_clip({noise_source(0.5, 0, 101, SphericalDoa(0, 0), 2)}, 1),
                  validation_error);
  CHECK_THROWS_AS(simulate_clip({noise_source(0.5, 10, 10, SphericalDoa(0, 0), 2)}, 1),
                  validation_error);

  CHECK_THROWS_AS(simulate_clip({noise_source(0.5, 0, 10, SphericalDoa(0, 0), 13)}, 1),
                  validation_error);
  CHECK_THROWS_AS(simulate_clip({noise_source(0.5, 0, 10, SphericalDoa(0, 0), -1)}, 1),
                  validation_error);

  // one source may not overlap itself; two sources may overlap each other
  SourceTrajectory self_overlap = noise_source(0.5, 0, 20, SphericalDoa(0, 0), 2);
  self_overlap.segments.push_back(TrajectorySegment{10, 30, SphericalDoa(10, 0), 2});
  CHECK_THROWS_AS(simulate_clip({self_overlap}, 1), validation_error);

  const auto both = simulate_clip({noise_source(0.4, 0, 20, SphericalDoa(30, 0), 2),
                                   noise_source(0.4, 10, 30, SphericalDoa(-30, 0), 3)},
                                  1);
  CHECK(both.annotations.size() == 40);

  CHECK_THROWS_AS(
      simulate_clip({noise_source(0.5, 0, 1, SphericalDoa(0, 0), 2)}, 1, "sim", 0),
      validation_error);
}

TEST_CASE("identical seeds render bit-identical clips") {
  const std::vector<SourceTrajectory> sources = {
      noise_source(0.4, 5, 45, SphericalDoa(60, 20), 0),
      tone_source(500.0, 0.3, 20, 80, SphericalDoa(-120, -30), 6),
  };
  const AvClipPair a = simulate_clip(sources, 42, "a");
  const AvClipPair b = simulate_clip(sources, 42, "b");
  for (int c = 0; c < kFoaChannels; ++c) CHECK(a.audio.channels[c] == b.audio.channels[c]);
  CHECK(a.annotations.size() == b.annotations.size());
  CHECK(a.keypoints.size() == b.keypoints.size());

  const AvClipPair other = simulate_clip(sources, 43, "c");
  bool any_diff = false;
  for (std::size_t i = 0; i < a.audio.channels[0].size() && !any_diff; ++i) {
    any_diff = a.audio.channels[0][i] != other.audio.channels[0][i];
  }
  CHECK(any_diff);
}

TEST_CASE("annotations cover exactly the active frames") {
  const auto pair = simulate_clip({noise_source(0.4, 12, 37, SphericalDoa(45, 10), 3)}, 7);
  CHECK(pair.audio.sample_rate == 24000);
  CHECK(pair.audio.sample_count() == 100u * 2400u);
  REQUIRE(pair.annotations.size() == 25);
  for (int i = 0; i < 25; ++i) {
    const EventAnnotation& e = pair.annotations[i];
    CHECK(e.frame_index == 12 + i);
    CHECK(e.class_index == 3);
    CHECK(e.source_index == 0);
    CHECK(e.doa.azimuth_deg() == 45.0);
    CHECK(e.doa.elevation_deg() == 10.0);
  }
}

TEST_CASE("speech sources get a mouth keypoint at the projected DOA") {
  const PanoramaSpec spec;
  const SphericalDoa doa(75.0, -15.0);
  const auto pair = simulate_clip({noise_source(0.4, 10, 20, SphericalDoa(-40, 5), 6),  // steps
                                   noise_source(0.4, 10, 20, doa, 1)},                  // speech
                                  9, "kp", 100, spec);
  REQUIRE(pair.keypoints.size() == 100);
  const PixelCoord want = spherical_to_pixel(doa, spec);
  for (int f = 0; f < 100; ++f) {
    CHECK(pair.keypoints[f].time_index == f);
    if (f >= 10 && f < 20) {
      REQUIRE(pair.keypoints[f].observations.size() == 1);  // footsteps emit none
      const KeypointObservation& obs = pair.keypoints[f].observations[0];
      CHECK(obs.person_id == 1);
      CHECK(obs.kind == KeypointKind::mouth);
      CHECK(obs.position == want);
      CHECK(obs.confidence == 1.0);
    } else {
      CHECK(pair.keypoints[f].observations.empty());
    }
  }
}

TEST_CASE("dipole gains put the signal on the matching channels") {
  // source on the +y axis: X and Z carry only the noise floor
  const auto pair = simulate_clip({tone_source(400.0, 0.5, 0, 100, SphericalDoa(90, 0), 8)}, 11);
  double max_x = 0.0, max_y = 0.0, max_w = 0.0;
  for (std::size_t i = 0; i < pair.audio.sample_count(); ++i) {
    max_x = std::max(max_x, std::abs(pair.audio.channels[kChannelX][i]));
    max_y = std::max(max_y, std::abs(pair.audio.channels[kChannelY][i]));
    max_w = std::max(max_w, std::abs(pair.audio.channels[kChannelW][i]));
    CHECK(std::abs(pair.audio.channels[kChannelW][i] - pair.audio.channels[kChannelY][i]) <=
          2.0e-3);
  }
  CHECK(max_x <= 1.0e-3);
  CHECK(max_y >= 0.4);
  CHECK(max_w >= 0.4);
}

TEST_CASE("the noise floor keeps silent frames slightly alive") {
  const auto pair = simulate_clip({noise_source(0.4, 50, 100, SphericalDoa(0, 0), 2)}, 13);
  double max_abs = 0.0;
  bool any_nonzero = false;
  for (int c = 0; c < kFoaChannels; ++c) {
    for (std::size_t i = 0; i < 50u * 2400u; ++i) {
      const double v = pair.audio.channels[c][i];
      max_abs = std::max(max_abs, std::abs(v));
      any_nonzero = any_nonzero || v != 0.0;
    }
  }
  CHECK(any_nonzero);
  CHECK(max_abs <= kNoiseFloorAmplitude);
}

TEST_CASE("intensity-vector DOA estimates land on the simulated source") {
  const struct {
    double az, el;
    SignalKind kind;
  } cases[] = {
      {0.0, 0.0, SignalKind::tone},    {90.0, 0.0, SignalKind::noise},
      {-120.0, 30.0, SignalKind::tone}, {170.0, -45.0, SignalKind::noise},
      {45.0, 60.0, SignalKind::tone},
  };
  for (const auto& c : cases) {
    SourceTrajectory src;
    src.signal = c.kind;
    src.tone_hz = 620.0;
    src.gain = 0.5;
    src.segments.push_back(TrajectorySegment{0, 10, SphericalDoa(c.az, c.el), 4});
    const auto pair = simulate_clip({src}, 17, "est", 10);
    const SphericalDoa est = estimate_doa_iv(pair.audio, 0, 10);
    CHECK(angle_between(est, SphericalDoa(c.az, c.el)) <= 2.0);
  }
}

TEST_CASE("estimates follow a source that jumps between segments") {
  SourceTrajectory src;
  src.signal = SignalKind::noise;
  src.gain = 0.5;
  src.segments.push_back(TrajectorySegment{0, 20, SphericalDoa(30, 10), 2});
  src.segments.push_back(TrajectorySegment{25, 45, SphericalDoa(-140, -20), 2});
  const auto pair = simulate_clip({src}, 19, "jump", 50);
  CHECK(angle_between(estimate_doa_iv(pair.audio, 2, 18), SphericalDoa(30, 10)) <= 2.0);
  CHECK(angle_between(estimate_doa_iv(pair.audio, 27, 43), SphericalDoa(-140, -20)) <= 2.0);
}

TEST_CASE("estimation rejects silence and bad ranges") {
  FoaClip silent;
  for (auto& ch : silent.channels) ch.assign(24000, 0.0);
  CHECK_THROWS_AS(estimate_doa_iv(silent, 0, 10), estimate_error);

  const auto pair = simulate_clip({noise_source(0.5, 0, 10, SphericalDoa(0, 0), 2)}, 23, "r", 10);
  CHECK_THROWS_AS(estimate_doa_iv(pair.audio, -1, 5), validation_error);
  CHECK_THROWS_AS(estimate_doa_iv(pair.audio, 0, 11), validation_error);
  CHECK_THROWS_AS(estimate_doa_iv(pair.audio, 5, 5), validation_error);
}
