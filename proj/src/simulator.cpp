#include "avseld/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "avseld/audio_features.hpp"
#include "avseld/errors.hpp"
#include "avseld/random.hpp"

namespace avseld {

namespace {

bool is_speech_class(int class_index) { return class_index == 0 || class_index == 1; }

void check_sources(const std::vector<SourceTrajectory>& sources, int frame_count) {
  if (sources.empty()) throw validation_error("trajectory list is empty");
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const SourceTrajectory& src = sources[s];
    if (src.segments.empty()) {
      throw validation_error("source " + std::to_string(s) + " has no segments");
    }
    if (!(src.gain > 0.0) || src.gain > 1.0) {
      throw validation_error("source gain must be in (0, 1]");
    }
    std::vector<TrajectorySegment> sorted = src.segments;
    std::sort(sorted.begin(), sorted.end(),
              [](const TrajectorySegment& a, const TrajectorySegment& b) {
                return a.start_frame < b.start_frame;
              });
    int prev_end = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const TrajectorySegment& seg = sorted[i];
      if (seg.start_frame < 0 || seg.end_frame > frame_count || seg.start_frame >= seg.end_frame) {
        throw validation_error("segment frames outside clip for source " + std::to_string(s));
      }
      if (seg.class_index < 0 || seg.class_index >= kNumClasses) {
        throw validation_error("segment class out of range for source " + std::to_string(s));
      }
      if (i > 0 && seg.start_frame < prev_end) {
        throw validation_error("overlapping segments for source " + std::to_string(s));
      }
      prev_end = seg.end_frame;
    }
  }
}

}  // namespace

AvClipPair simulate_clip(const std::vector<SourceTrajectory>& sources, std::uint64_t seed,
                         const std::string& clip_id, int frame_count,
                         const PanoramaSpec& panorama) {
  if (frame_count <= 0) throw validation_error("frame_count must be positive");
  check_sources(sources, frame_count);

  const std::size_t n_samples = static_cast<std::size_t>(frame_count) * kSamplesPerFrame;
  AvClipPair pair;
  pair.clip_id = clip_id;
  pair.panorama = panorama;
  pair.audio.sample_rate = kSampleRate;
  for (auto& ch : pair.audio.channels) ch.assign(n_samples, 0.0);
  pair.keypoints.resize(frame_count);
  for (int f = 0; f < frame_count; ++f) pair.keypoints[f].time_index = f;

  for (std::size_t s = 0; s < sources.size(); ++s) {
    const SourceTrajectory& src = sources[s];
    std::mt19937_64 rng(derive_seed(seed, s));
    const double phase = uniform_in(rng, 0.0, 2.0 * kPi);
    for (const TrajectorySegment& seg : src.segments) {
      const CartesianDoa dir = spherical_to_cartesian(seg.doa);
      const double gw = 1.0, gy = dir.y(), gz = dir.z(), gx = dir.x();
      const std::size_t a = static_cast<std::size_t>(seg.start_frame) * kSamplesPerFrame;
      const std::size_t b = static_cast<std::size_t>(seg.end_frame) * kSamplesPerFrame;
      for (std::size_t i = a; i < b; ++i) {
        double sample;
        if (src.signal == SignalKind::tone) {
          sample = src.gain *
                   std::sin(2.0 * kPi * src.tone_hz * static_cast<double>(i) / kSampleRate + phase);
        } else {
          sample = src.gain * uniform_in(rng, -1.0, 1.0);
        }
        pair.audio.channels[kChannelW][i] += gw * sample;
        pair.audio.channels[kChannelY][i] += gy * sample;
        pair.audio.channels[kChannelZ][i] += gz * sample;
        pair.audio.channels[kChannelX][i] += gx * sample;
      }
      for (int f = seg.start_frame; f < seg.end_frame; ++f) {
        EventAnnotation e;
        e.frame_index = f;
        e.class_index = seg.class_index;
        e.source_index = static_cast<int>(s);
        e.doa = seg.doa;
        pair.annotations.push_back(e);
        if (is_speech_class(seg.class_index)) {
          KeypointObservation obs;
          obs.person_id = static_cast<int>(s);
          obs.kind = KeypointKind::mouth;
          obs.position = spherical_to_pixel(seg.doa, panorama);
          obs.confidence = 1.0;
          pair.keypoints[f].observations.push_back(obs);
        }
      }
    }
  }

  // Independent per-channel noise floor.
  std::mt19937_64 floor_rng(derive_seed(seed, 0x6e6f6973ULL));
  for (auto& ch : pair.audio.channels) {
    for (double& v : ch) v += kNoiseFloorAmplitude * uniform_in(floor_rng, -1.0, 1.0);
  }
  return pair;
}

SphericalDoa estimate_doa_iv(const FoaClip& clip, int start_frame, int end_frame) {
  const int clip_frames =
      static_cast<int>(clip.channels[0].size() / static_cast<std::size_t>(kSamplesPerFrame));
  if (start_frame < 0 || end_frame > clip_frames || start_frame >= end_frame) {
    throw validation_error("estimate range [" + std::to_string(start_frame) + ", " +
                           std::to_string(end_frame) + ") outside clip");
  }
  const Spectrogram spec = stft(clip);
  const Array3d iv = raw_intensity(spec);
  // 100 ms label frames cover 5 STFT hops each.
  const int stft_per_label = kSamplesPerFrame / kHopLen;
  const int f0 = start_frame * stft_per_label;
  const int f1 = std::min(end_frame * stft_per_label, spec.frames);
  double acc[3] = {0.0, 0.0, 0.0};
  for (int f = f0; f < f1; ++f) {
    for (int b = 0; b < spec.bins; ++b) {
      acc[0] += iv.at(0, f, b);
      acc[1] += iv.at(1, f, b);
      acc[2] += iv.at(2, f, b);
    }
  }
  const double norm = std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
  if (!(norm > 1e-12)) {
    throw estimate_error("intensity too small to estimate a direction");
  }
  return cartesian_to_spherical(CartesianDoa(acc[0], acc[1], acc[2]));
}

}  // namespace avseld
