#pragma once

#include <filesystem>

#include "avseld/foa_clip.hpp"

namespace avseld {

// RIFF/WAVE, integer PCM only (16/24/32 bit), normalized to [-1, 1] by the
// type's full scale. Anything malformed raises data_error; no coercion.
struct WavData {
  int sample_rate = 0;
  int channels = 0;
  std::vector<std::vector<double>> samples;  // [channel][frame]
};

WavData read_wav(const std::filesystem::path& path);

// read_wav plus the FOA contract: exactly 4 channels at 24 kHz.
FoaClip read_foa_wav(const std::filesystem::path& path);

// Canonical 16-bit PCM writer. Samples are clipped to [-1, 1] and rounded to
// the nearest integer level.
void write_foa_wav(const FoaClip& clip, const std::filesystem::path& path);

}  // namespace avseld
