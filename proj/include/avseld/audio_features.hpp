#pragma once

#include <complex>
#include <vector>

#include "avseld/foa_clip.hpp"

namespace avseld {

// Fixed analysis geometry: 24 kHz input, 40 ms frames, 20 ms hop, 1024-point
// FFT, 64 HTK mel bands spanning 0..12 kHz. A 10 s clip yields 500 frames.
inline constexpr int kSampleRate = 24000;
inline constexpr int kFrameLen = 960;
inline constexpr int kHopLen = 480;
inline constexpr int kFftSize = 1024;
inline constexpr int kFftBins = kFftSize / 2 + 1;
inline constexpr int kMelBands = 64;
inline constexpr double kMelFMin = 0.0;
inline constexpr double kMelFMax = 12000.0;
inline constexpr double kLogEpsilon = 1e-10;
inline constexpr int kClipSamples = 240000;  // 10 s
inline constexpr int kClipFrames = kClipSamples / kHopLen;

// Complex STFT of a 4-channel clip, layout [channel][frame][bin].
struct Spectrogram {
  int channels = 0;
  int frames = 0;
  int bins = 0;
  int sample_rate = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(int ch, int f, int b) {
    return data[(static_cast<std::size_t>(ch) * frames + f) * bins + b];
  }
  const std::complex<double>& at(int ch, int f, int b) const {
    return data[(static_cast<std::size_t>(ch) * frames + f) * bins + b];
  }
};

// Small dense rank-3 array of doubles.
struct Array3d {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<double> v;

  Array3d() = default;
  Array3d(int a, int b, int c)
      : d0(a), d1(b), d2(c), v(static_cast<std::size_t>(a) * b * c, 0.0) {}
  double& at(int i, int j, int k) {
    return v[(static_cast<std::size_t>(i) * d1 + j) * d2 + k];
  }
  double at(int i, int j, int k) const {
    return v[(static_cast<std::size_t>(i) * d1 + j) * d2 + k];
  }
};

// Hann-windowed STFT. Frames are centered at k * hop via half-frame
// reflection padding, so the frame count is sample_count / hop. Requires a
// 24 kHz clip of at least one frame; no implicit resampling.
Spectrogram stft(const FoaClip& clip);

// Triangular HTK-mel filterbank, kMelBands x kFftBins row-major weights.
std::vector<double> mel_filterbank();

// log(power + eps) mel spectrogram per channel: 4 x frames x 64.
Array3d log_mel(const Spectrogram& spec);

// Acoustic intensity per time-frequency bin, Re{conj(W) * (X, Y, Z)}, before
// any banding or normalization: 3 x frames x kFftBins, component order x,y,z.
Array3d raw_intensity(const Spectrogram& spec);

// Mel-banded intensity vectors, unit-normalized per (frame, band) with the
// same epsilon guard as log_mel: 3 x frames x 64, values in [-1, 1].
Array3d intensity_vector(const Spectrogram& spec);

// Stacked network input, [frame][channel][band] with channels = 4 log-mel
// (ACN order) followed by 3 intensity components (x, y, z).
struct AudioFeature {
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

// Full audio front end for one 10 s clip; output is 500 x 7 x 64.
AudioFeature extract_audio_features(const FoaClip& clip);

}  // namespace avseld
