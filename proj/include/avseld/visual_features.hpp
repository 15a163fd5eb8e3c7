#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "avseld/audio_features.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

enum class KeypointKind { mouth = 0, left_hand, right_hand, left_foot, right_foot };

inline constexpr int kNumKeypointKinds = 5;

std::string_view keypoint_kind_name(KeypointKind k);
KeypointKind parse_keypoint_kind(std::string_view name);  // throws data_error

// One detected keypoint in one 100 ms frame.
struct KeypointObservation {
  int person_id = 0;
  KeypointKind kind = KeypointKind::mouth;
  PixelCoord position;
  double confidence = 1.0;  // in [0, 1]
};

struct KeypointFrame {
  int time_index = 0;  // 100 ms units from clip start
  std::vector<KeypointObservation> observations;
};

// Visual timeline geometry: keypoints arrive at 10 fps, 100 frames per 10 s
// clip, and are upsampled x5 to the 20 ms audio frame rate at fusion time.
inline constexpr int kVisualFrames = 100;
inline constexpr int kMaxPersons = 6;
inline constexpr int kAxisBins = 64;
inline constexpr int kVisualUpsample = 5;

// Gaussian bin widths as fractions of the 64-bin axis. The defaults give
// sigma = 2.56 bins horizontally and 5.12 bins vertically. Widths below half
// a bin are rejected.
struct VisualEncodingConfig {
  double sigma_h_frac = 0.04;
  double sigma_v_frac = 0.08;
};

// Horizontal/vertical soft-position vectors for one mouth pixel:
//   g[i] = exp(-(i - c)^2 / (2 sigma^2)),  c = (coord + 0.5) * 64 / extent
// Values are in (0, 1], strictly positive, monotone away from the center.
struct GaussianPair {
  std::array<double, kAxisBins> horizontal;
  std::array<double, kAxisBins> vertical;
};

GaussianPair encode_gaussian(PixelCoord mouth, const PanoramaSpec& spec,
                             const VisualEncodingConfig& cfg = {});

// Per-clip mouth tensor, [frame][person][axis][bin] with axis 0 horizontal.
// Person slots are filled in descending confidence order (ties by ascending
// person id), capped at kMaxPersons, zero-padded.
struct VisualFeature {
  int frames = 0;
  int persons = 0;
  int axes = 0;
  int bins = 0;
  std::vector<float> data;

  float& at(int f, int p, int a, int b) {
    return data[((static_cast<std::size_t>(f) * persons + p) * axes + a) * bins + b];
  }
  float at(int f, int p, int a, int b) const {
    return data[((static_cast<std::size_t>(f) * persons + p) * axes + a) * bins + b];
  }
};

// Requires exactly kVisualFrames frames with time_index 0..99 in order.
VisualFeature assemble_visual_features(const std::vector<KeypointFrame>& frames,
                                       const PanoramaSpec& spec,
                                       const VisualEncodingConfig& cfg = {});

// Audio-visual network input, [frame][channel][band]: channels 0..6 are the
// audio feature, 7..18 the visual tensor flattened person-major with the
// horizontal axis before the vertical. Visual frames are repeated x5.
struct FusedFeature {
  int frames = 0;
  int channels = 0;
  int bands = 0;
  std::vector<float> data;

  float& at(int f, int c, int b) {
    return data[(static_cast<std::size_t>(f) * channels + c) * bands + b];
  }
  float at(int f, int c, int b) const {
    return data[(static_cast<std::size_t>(f) * channels + c) * bands + b];
  }
};

FusedFeature upsample_and_fuse(const VisualFeature& visual, const AudioFeature& audio);

}  // namespace avseld
