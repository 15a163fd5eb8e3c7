#include "avseld/audio_features.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "avseld/errors.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

namespace {

// The FFTW planner is not thread-safe; plan create/destroy must be serialized.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Index into a reflection-padded signal (numpy-style, edge not repeated).
inline std::size_t reflect_index(long i, std::size_t n) {
  if (i < 0) return static_cast<std::size_t>(-i);
  if (i >= static_cast<long>(n)) return 2 * n - 2 - static_cast<std::size_t>(i);
  return static_cast<std::size_t>(i);
}

}  // namespace

Spectrogram stft(const FoaClip& clip) {
  if (clip.sample_rate != kSampleRate) {
    throw validation_error("unsupported sample rate " + std::to_string(clip.sample_rate) +
                           ", expected " + std::to_string(kSampleRate));
  }
  const std::size_t n = clip.channels[0].size();
  for (const auto& ch : clip.channels) {
    if (ch.size() != n) throw validation_error("FOA channels have unequal lengths");
  }
  if (n < static_cast<std::size_t>(kFrameLen)) {
    throw validation_error("clip shorter than one analysis frame");
  }

  Spectrogram spec;
  spec.channels = kFoaChannels;
  spec.frames = static_cast<int>(n / kHopLen);
  spec.bins = kFftBins;
  spec.sample_rate = clip.sample_rate;
  spec.data.resize(static_cast<std::size_t>(spec.channels) * spec.frames * spec.bins);

  // Periodic Hann window.
  std::vector<double> window(kFrameLen);
  for (int i = 0; i < kFrameLen; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / kFrameLen);
  }

  double* in;
  fftw_complex* out;
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    in = fftw_alloc_real(kFftSize);
    out = fftw_alloc_complex(kFftBins);
    plan = fftw_plan_dft_r2c_1d(kFftSize, in, out, FFTW_ESTIMATE);
  }

  for (int ch = 0; ch < spec.channels; ++ch) {
    const std::vector<double>& x = clip.channels[ch];
    for (int f = 0; f < spec.frames; ++f) {
      // Frame f is centered at sample f * hop; half a frame of left context
      // comes from the reflection pad.
      const long start = static_cast<long>(f) * kHopLen - kFrameLen / 2;
      for (int i = 0; i < kFrameLen; ++i) {
        in[i] = x[reflect_index(start + i, n)] * window[i];
      }
      for (int i = kFrameLen; i < kFftSize; ++i) in[i] = 0.0;
      fftw_execute(plan);
      for (int b = 0; b < spec.bins; ++b) {
        spec.at(ch, f, b) = std::complex<double>(out[b][0], out[b][1]);
      }
    }
  }

  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  return spec;
}

std::vector<double> mel_filterbank() {
  auto hz_to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto mel_to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };

  // kMelBands + 2 edge frequencies, equally spaced on the mel scale.
  std::vector<double> edges(kMelBands + 2);
  const double mel_lo = hz_to_mel(kMelFMin);
  const double mel_hi = hz_to_mel(kMelFMax);
  for (int i = 0; i < kMelBands + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (kMelBands + 1));
  }

  std::vector<double> fb(static_cast<std::size_t>(kMelBands) * kFftBins, 0.0);
  for (int m = 0; m < kMelBands; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int b = 0; b < kFftBins; ++b) {
      const double f = static_cast<double>(b) * kSampleRate / kFftSize;
      double w = 0.0;
      if (f > lo && f < mid) {
        w = (f - lo) / (mid - lo);
      } else if (f == mid) {
        w = 1.0;
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      fb[static_cast<std::size_t>(m) * kFftBins + b] = w;
    }
  }
  return fb;
}

Array3d log_mel(const Spectrogram& spec) {
  const std::vector<double> fb = mel_filterbank();
  Array3d out(spec.channels, spec.frames, kMelBands);
  for (int ch = 0; ch < spec.channels; ++ch) {
    for (int f = 0; f < spec.frames; ++f) {
      for (int m = 0; m < kMelBands; ++m) {
        double acc = 0.0;
        const double* w = &fb[static_cast<std::size_t>(m) * kFftBins];
        for (int b = 0; b < spec.bins; ++b) {
          if (w[b] != 0.0) acc += w[b] * std::norm(spec.at(ch, f, b));
        }
        out.at(ch, f, m) = std::log(acc + kLogEpsilon);
      }
    }
  }
  return out;
}

Array3d raw_intensity(const Spectrogram& spec) {
  Array3d out(3, spec.frames, spec.bins);
  for (int f = 0; f < spec.frames; ++f) {
    for (int b = 0; b < spec.bins; ++b) {
      const std::complex<double> w = std::conj(spec.at(kChannelW, f, b));
      out.at(0, f, b) = (w * spec.at(kChannelX, f, b)).real();
      out.at(1, f, b) = (w * spec.at(kChannelY, f, b)).real();
      out.at(2, f, b) = (w * spec.at(kChannelZ, f, b)).real();
    }
  }
  return out;
}

Array3d intensity_vector(const Spectrogram& spec) {
  const Array3d raw = raw_intensity(spec);
  const std::vector<double> fb = mel_filterbank();
  Array3d out(3, spec.frames, kMelBands);
  for (int f = 0; f < spec.frames; ++f) {
    for (int m = 0; m < kMelBands; ++m) {
      const double* w = &fb[static_cast<std::size_t>(m) * kFftBins];
      double acc[3] = {0.0, 0.0, 0.0};
      for (int b = 0; b < spec.bins; ++b) {
        if (w[b] != 0.0) {
          acc[0] += w[b] * raw.at(0, f, b);
          acc[1] += w[b] * raw.at(1, f, b);
          acc[2] += w[b] * raw.at(2, f, b);
        }
      }
      const double norm = std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
      for (int c = 0; c < 3; ++c) {
        out.at(c, f, m) = acc[c] / (norm + kLogEpsilon);
      }
    }
  }
  return out;
}

AudioFeature extract_audio_features(const FoaClip& clip) {
  if (clip.channels[0].size() != static_cast<std::size_t>(kClipSamples)) {
    throw validation_error("clip must hold exactly " + std::to_string(kClipSamples) +
                           " samples, got " + std::to_string(clip.channels[0].size()));
  }
  const Spectrogram spec = stft(clip);
  const Array3d lm = log_mel(spec);
  const Array3d iv = intensity_vector(spec);

  AudioFeature feat;
  feat.frames = spec.frames;
  feat.channels = 7;
  feat.bands = kMelBands;
  feat.data.resize(static_cast<std::size_t>(feat.frames) * feat.channels * feat.bands);
  for (int f = 0; f < feat.frames; ++f) {
    for (int c = 0; c < 4; ++c) {
      for (int b = 0; b < kMelBands; ++b) {
        feat.at(f, c, b) = static_cast<float>(lm.at(c, f, b));
      }
    }
    for (int c = 0; c < 3; ++c) {
      for (int b = 0; b < kMelBands; ++b) {
        feat.at(f, 4 + c, b) = static_cast<float>(iv.at(c, f, b));
      }
    }
  }
  return feat;
}

}  // namespace avseld
