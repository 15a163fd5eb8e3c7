#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace avseld {

// One clip in a dataset manifest. Paths are stored relative to the manifest
// file and resolved against its directory.
struct ManifestEntry {
  std::string clip_id;
  std::filesystem::path audio;      // 4-channel 24 kHz WAV
  std::filesystem::path metadata;   // event annotation CSV
  std::filesystem::path keypoints;  // keypoint JSON document
  std::string split;                // "dev-train" or "dev-test"
};

struct Manifest {
  std::filesystem::path root;  // directory of the manifest file
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::filesystem::path& rel) const {
    return root / rel;
  }
};

// Strict versioned JSON: unique clip ids, known splits, and every referenced
// file must exist on disk.
Manifest read_manifest(const std::filesystem::path& path);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace avseld
