#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "avseld/augmentation_types.hpp"
#include "avseld/config.hpp"
#include "avseld/manifest.hpp"
#include "avseld/metrics.hpp"
#include "avseld/simulator.hpp"

namespace avseld {

// Six one-second events on disjoint frame ranges, one source each, cycling
// through a fixed class list with integer-degree directions. Seeded, so the
// same seed always describes the same scene.
std::vector<SourceTrajectory> random_disjoint_scene(std::uint64_t seed);

// Writes <clip_id>.wav / .csv / .keypoints.json into dir and returns the
// manifest entry (paths relative to dir).
ManifestEntry write_clip_pair(const AvClipPair& pair, const std::filesystem::path& dir,
                              const std::string& split);

// Loads the three files behind a manifest entry back into memory.
AvClipPair load_clip_pair(const Manifest& manifest, const ManifestEntry& entry);

struct PipelineResult {
  std::filesystem::path out_dir;
  std::string config_digest_hex;
  MetricsReport identity_report;   // references scored against themselves
  MetricsReport estimated_report;  // intensity-estimated, fusion-corrected predictions
  std::map<std::string, std::string> digests;  // relative path -> FNV-1a hex
};

// Full run: acquire clips (simulate, or read the configured manifest), expand
// eightfold, extract fused features for the originals, score, and leave a
// provenance record plus a digest table under out_dir. Identical config and
// seed produce identical digest tables.
PipelineResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                            int workers);

}  // namespace avseld
