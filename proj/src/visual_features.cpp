#include "avseld/visual_features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

constexpr std::array<std::string_view, kNumKeypointKinds> kKindNames = {
    "mouth", "left_hand", "right_hand", "left_foot", "right_foot"};

void check_sigma(double frac, const char* axis) {
  if (!(frac * kAxisBins >= 0.5)) {
    throw validation_error(std::string("gaussian sigma on the ") + axis +
                           " axis is below half a bin");
  }
}

void fill_gaussian(double center, double sigma_bins, std::array<double, kAxisBins>& out) {
  const double denom = 2.0 * sigma_bins * sigma_bins;
  for (int i = 0; i < kAxisBins; ++i) {
    const double d = i - center;
    out[i] = std::exp(-(d * d) / denom);
  }
}

}  // namespace

std::string_view keypoint_kind_name(KeypointKind k) {
  return kKindNames[static_cast<int>(k)];
}

KeypointKind parse_keypoint_kind(std::string_view name) {
  for (int i = 0; i < kNumKeypointKinds; ++i) {
    if (kKindNames[i] == name) return static_cast<KeypointKind>(i);
  }
  throw data_error("unknown keypoint kind \"" + std::string(name) + "\"");
}

GaussianPair encode_gaussian(PixelCoord mouth, const PanoramaSpec& spec,
                             const VisualEncodingConfig& cfg) {
  if (mouth.u < 0 || mouth.u >= spec.width_px || mouth.v < 0 || mouth.v >= spec.height_px) {
    throw validation_error("mouth pixel out of bounds");
  }
  check_sigma(cfg.sigma_h_frac, "horizontal");
  check_sigma(cfg.sigma_v_frac, "vertical");
  const double ch = (mouth.u + 0.5) * kAxisBins / spec.width_px;
  const double cv = (mouth.v + 0.5) * kAxisBins / spec.height_px;
  GaussianPair pair;
  fill_gaussian(ch, cfg.sigma_h_frac * kAxisBins, pair.horizontal);
  fill_gaussian(cv, cfg.sigma_v_frac * kAxisBins, pair.vertical);
  return pair;
}

VisualFeature assemble_visual_features(const std::vector<KeypointFrame>& frames,
                                       const PanoramaSpec& spec,
                                       const VisualEncodingConfig& cfg) {
  if (frames.size() != static_cast<std::size_t>(kVisualFrames)) {
    throw validation_error("expected " + std::to_string(kVisualFrames) +
                           " keypoint frames, got " + std::to_string(frames.size()));
  }
  VisualFeature feat;
  feat.frames = kVisualFrames;
  feat.persons = kMaxPersons;
  feat.axes = 2;
  feat.bins = kAxisBins;
  feat.data.assign(
      static_cast<std::size_t>(feat.frames) * feat.persons * feat.axes * feat.bins, 0.0f);

  for (int f = 0; f < kVisualFrames; ++f) {
    if (frames[f].time_index != f) {
      throw validation_error("keypoint frame " + std::to_string(f) +
                             " has time_index " + std::to_string(frames[f].time_index));
    }
    std::vector<KeypointObservation> mouths;
    for (const KeypointObservation& obs : frames[f].observations) {
      if (obs.kind == KeypointKind::mouth) mouths.push_back(obs);
    }
    std::stable_sort(mouths.begin(), mouths.end(),
                     [](const KeypointObservation& a, const KeypointObservation& b) {
                       if (a.confidence != b.confidence) return a.confidence > b.confidence;
                       return a.person_id < b.person_id;
                     });
    const int count = std::min<int>(kMaxPersons, static_cast<int>(mouths.size()));
    for (int p = 0; p < count; ++p) {
      const GaussianPair g = encode_gaussian(mouths[p].position, spec, cfg);
      for (int b = 0; b < kAxisBins; ++b) {
        feat.at(f, p, 0, b) = static_cast<float>(g.horizontal[b]);
        feat.at(f, p, 1, b) = static_cast<float>(g.vertical[b]);
      }
    }
  }
  return feat;
}

FusedFeature upsample_and_fuse(const VisualFeature& visual, const AudioFeature& audio) {
  if (visual.persons != kMaxPersons || visual.axes != 2 || visual.bins != kAxisBins ||
      audio.bands != kAxisBins) {
    throw validation_error("unexpected feature tensor shape");
  }
  if (audio.frames != visual.frames * kVisualUpsample) {
    throw validation_error("audio frame count " + std::to_string(audio.frames) +
                           " is not " + std::to_string(kVisualUpsample) + "x the " +
                           std::to_string(visual.frames) + " visual frames");
  }
  FusedFeature fused;
  fused.frames = audio.frames;
  fused.channels = audio.channels + visual.persons * visual.axes;
  fused.bands = audio.bands;
  fused.data.resize(static_cast<std::size_t>(fused.frames) * fused.channels * fused.bands);
  for (int f = 0; f < fused.frames; ++f) {
    const int vf = f / kVisualUpsample;
    for (int c = 0; c < audio.channels; ++c) {
      for (int b = 0; b < fused.bands; ++b) fused.at(f, c, b) = audio.at(f, c, b);
    }
    for (int p = 0; p < visual.persons; ++p) {
      for (int a = 0; a < 2; ++a) {
        const int c = audio.channels + p * 2 + a;
        for (int b = 0; b < fused.bands; ++b) fused.at(f, c, b) = visual.at(vf, p, a, b);
      }
    }
  }
  return fused;
}

}  // namespace avseld
