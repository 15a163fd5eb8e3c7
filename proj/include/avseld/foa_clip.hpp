#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace avseld {

// First-order ambisonics audio, ACN channel order [W, Y, Z, X], SN3D scaling.
// Samples are nominally in [-1, 1]. All four channels must share one length.
struct FoaClip {
  int sample_rate = 24000;
  std::array<std::vector<double>, 4> channels;

  std::size_t sample_count() const { return channels[0].size(); }
};

inline constexpr int kFoaChannels = 4;
inline constexpr int kChannelW = 0;
inline constexpr int kChannelY = 1;
inline constexpr int kChannelZ = 2;
inline constexpr int kChannelX = 3;

}  // namespace avseld
