#include "avseld/feature_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

constexpr std::uint32_t kTensorVersion = 1;
constexpr std::uint32_t kDtypeF32 = 1;

void put32(std::ofstream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

std::uint32_t take32(std::ifstream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw data_error(path.string() + ": truncated file");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559,
              "float32 payload assumes IEEE 754 binary32");

}  // namespace

std::size_t FeatureTensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

FeatureTensor read_feature_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error(path.string() + ": cannot open file");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "AVSF", 4) != 0) {
    throw data_error(path.string() + ": not a feature tensor file");
  }
  const std::uint32_t version = take32(in, path);
  if (version != kTensorVersion) {
    throw data_error(path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t dtype = take32(in, path);
  if (dtype != kDtypeF32) {
    throw data_error(path.string() + ": unsupported dtype " + std::to_string(dtype));
  }
  const std::uint32_t rank = take32(in, path);
  if (rank == 0 || rank > 8) {
    throw data_error(path.string() + ": implausible rank " + std::to_string(rank));
  }
  FeatureTensor t;
  t.dims.resize(rank);
  std::size_t count = 1;
  for (std::uint32_t& d : t.dims) {
    d = take32(in, path);
    if (d == 0) throw data_error(path.string() + ": zero-sized dimension");
    count *= d;
  }
  t.values.resize(count);
  if (!in.read(reinterpret_cast<char*>(t.values.data()),
               static_cast<std::streamsize>(count * 4))) {
    throw data_error(path.string() + ": truncated payload");
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw data_error(path.string() + ": trailing bytes after payload");
  }
  return t;
}

void write_feature_tensor(const FeatureTensor& tensor,
                          const std::filesystem::path& path) {
  if (tensor.dims.empty()) throw validation_error("feature tensor has no dimensions");
  if (tensor.values.size() != tensor.element_count()) {
    throw validation_error("feature tensor value count does not match its dimensions");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os.write("AVSF", 4);
  put32(os, kTensorVersion);
  put32(os, kDtypeF32);
  put32(os, static_cast<std::uint32_t>(tensor.dims.size()));
  for (std::uint32_t d : tensor.dims) put32(os, d);
  os.write(reinterpret_cast<const char*>(tensor.values.data()),
           static_cast<std::streamsize>(tensor.values.size() * 4));
  if (!os) throw data_error(path.string() + ": write failed");
}

PixelMap build_pixel_map(const SpatialTransform& t, const PanoramaSpec& spec) {
  // transformed[d] = source[inverse(t)(d)], so store the preimage per pixel.
  const SpatialTransform inv = inverse(t);
  PixelMap map;
  map.width = spec.width_px;
  map.height = spec.height_px;
  map.source_index.resize(static_cast<std::size_t>(spec.width_px) * spec.height_px);
  for (int v = 0; v < spec.height_px; ++v) {
    for (int u = 0; u < spec.width_px; ++u) {
      const PixelCoord src = transform_pixel(inv, PixelCoord{u, v}, spec);
      map.source_index[static_cast<std::size_t>(v) * spec.width_px + u] =
          static_cast<std::uint32_t>(src.v) * spec.width_px + src.u;
    }
  }
  return map;
}

PixelMap read_pixel_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error(path.string() + ": cannot open file");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "AVPM", 4) != 0) {
    throw data_error(path.string() + ": not a pixel map file");
  }
  const std::uint32_t version = take32(in, path);
  if (version != 1) {
    throw data_error(path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t w = take32(in, path);
  const std::uint32_t h = take32(in, path);
  if (w == 0 || h == 0) throw data_error(path.string() + ": empty raster");
  PixelMap map;
  map.width = static_cast<int>(w);
  map.height = static_cast<int>(h);
  const std::size_t count = static_cast<std::size_t>(w) * h;
  map.source_index.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t s = take32(in, path);
    if (s >= count) throw data_error(path.string() + ": source index out of range");
    map.source_index[i] = s;
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw data_error(path.string() + ": trailing bytes after payload");
  }
  return map;
}

void write_pixel_map(const PixelMap& map, const std::filesystem::path& path) {
  const std::size_t count = static_cast<std::size_t>(map.width) * map.height;
  if (map.width <= 0 || map.height <= 0 || map.source_index.size() != count) {
    throw validation_error("pixel map shape does not match its index table");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os.write("AVPM", 4);
  put32(os, 1);
  put32(os, static_cast<std::uint32_t>(map.width));
  put32(os, static_cast<std::uint32_t>(map.height));
  for (std::uint32_t s : map.source_index) put32(os, s);
  if (!os) throw data_error(path.string() + ": write failed");
}

}  // namespace avseld
