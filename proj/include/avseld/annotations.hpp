#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "avseld/geometry.hpp"

namespace avseld {

// Sound event classes, in label order.
inline constexpr int kNumClasses = 13;

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "femaleSpeech", "maleSpeech",      "clapping", "telephone", "laughter",
    "domesticSounds", "footsteps",     "doorCupboard", "music", "musicInstrument",
    "waterTap",     "bell",            "knock",
};

// One labeled event in one 100 ms frame.
struct EventAnnotation {
  int frame_index = 0;   // 100 ms units from clip start
  int class_index = 0;   // 0 .. kNumClasses-1
  int source_index = 0;  // stable per-source id within the clip
  SphericalDoa doa;
  std::optional<int> distance_cm;  // optional, non-negative
};

}  // namespace avseld
