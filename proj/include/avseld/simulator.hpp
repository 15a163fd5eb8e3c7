#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avseld/augmentation_types.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

// 100 ms label frames; all simulator timing is expressed in them.
inline constexpr int kFramesPerSecond = 10;
inline constexpr int kSamplesPerFrame = 2400;  // 24 kHz / 10 fps

// Per-channel noise floor, -60 dB relative to full scale.
inline constexpr double kNoiseFloorAmplitude = 1e-3;

enum class SignalKind { noise, tone };

// Piecewise-static source: within each segment the source sits still at one
// DOA and emits one class. Segments of one source may not overlap in time.
struct TrajectorySegment {
  int start_frame = 0;  // inclusive
  int end_frame = 0;    // exclusive
  SphericalDoa doa;
  int class_index = 0;
};

struct SourceTrajectory {
  SignalKind signal = SignalKind::noise;
  double tone_hz = 440.0;
  double gain = 0.5;
  std::vector<TrajectorySegment> segments;
};

// Renders an anechoic FOA clip with SN3D point-source gains, frame-wise
// annotations, and a mouth keypoint track for speech-class sources (classes
// 0 and 1). Identical seeds give bit-identical output.
AvClipPair simulate_clip(const std::vector<SourceTrajectory>& sources, std::uint64_t seed,
                         const std::string& clip_id = "sim", int frame_count = 100,
                         const PanoramaSpec& panorama = {});

// DOA estimate over label frames [start_frame, end_frame): the unnormalized
// acoustic intensity is averaged across the range and converted to angles.
// Throws estimate_error when the averaged intensity has no usable direction
// (e.g. silence).
SphericalDoa estimate_doa_iv(const FoaClip& clip, int start_frame, int end_frame);

}  // namespace avseld
