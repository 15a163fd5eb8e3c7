#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "avseld/decision_fusion.hpp"
#include "avseld/losses.hpp"
#include "avseld/spatial_transforms.hpp"
#include "avseld/visual_features.hpp"

namespace avseld {

// Everything a pipeline run depends on besides the input files themselves.
// Defaults reproduce the toolkit's standard constants; the digest of the
// canonical form goes into every provenance record.
struct PipelineConfig {
  std::uint64_t seed = 1;
  int clip_count = 4;  // simulated clips when no input manifest is given
  std::optional<std::filesystem::path> manifest;  // relative to the config file
  std::vector<std::string> acs_transform_names;   // empty = default eightfold set
  bool emit_pixel_maps = false;
  VisualEncodingConfig visual;
  FusionConfig fusion;
  LossWeights loss_weights;
};

// Strict versioned JSON; unknown keys are rejected with their key path.
PipelineConfig read_pipeline_config(const std::filesystem::path& path);

// Canonical single-line JSON with sorted keys and defaults filled in. Two
// configs digest equal iff they request the same run.
std::string config_canonical_json(const PipelineConfig& cfg);

// FNV-1a hex digest of the canonical form.
std::string config_digest(const PipelineConfig& cfg);

// Resolves the configured transform names (or the default set) and validates
// the eightfold-set contract.
AcsSet acs_set_from_config(const PipelineConfig& cfg);

}  // namespace avseld
