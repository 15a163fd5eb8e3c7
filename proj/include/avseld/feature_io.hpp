#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "avseld/spatial_transforms.hpp"

namespace avseld {

// Feature tensors travel between the extractor and downstream training code
// in a tiny little-endian container:
//   "AVSF"  u32 version=1  u32 dtype=1 (float32)  u32 rank  u32 dims[rank]
// followed by the row-major payload. Nothing else: no timestamps, no
// padding, so byte-identical tensors produce byte-identical files.
struct FeatureTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const;
};

FeatureTensor read_feature_tensor(const std::filesystem::path& path);
void write_feature_tensor(const FeatureTensor& tensor,
                          const std::filesystem::path& path);

// Panorama pixel remap for one spatial transform:
//   "AVPM"  u32 version=1  u32 width  u32 height  u32 src_index[h*w]
// Entry (v * width + u) holds the row-major source pixel for destination
// (u, v); applying the map to a source image yields the transformed image.
struct PixelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> source_index;  // row-major by destination
};

PixelMap build_pixel_map(const SpatialTransform& t, const PanoramaSpec& spec);
PixelMap read_pixel_map(const std::filesystem::path& path);
void write_pixel_map(const PixelMap& map, const std::filesystem::path& path);

}  // namespace avseld
