#pragma once

#include <array>
#include <string>
#include <vector>

#include "avseld/annotations.hpp"
#include "avseld/foa_clip.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

// One element of the 16-element group of direction maps that are realizable
// as FOA channel swaps: azimuth quarter turns, azimuth reflection, elevation
// flip. Reflection applies before rotation:
//   azimuth'   = wrap(s * azimuth + quarter_turns * 90),  s = -1 iff reflect
//   elevation' = -elevation iff flip
struct SpatialTransform {
  int quarter_turns = 0;         // 0..3, counterclockwise 90 deg steps
  bool reflect_azimuth = false;  // azimuth sign flip (y -> -y)
  bool flip_elevation = false;   // elevation sign flip (z -> -z)

  bool operator==(const SpatialTransform&) const = default;

  // Stable enumeration index in [0, 16).
  int index() const {
    return quarter_turns + (reflect_azimuth ? 4 : 0) + (flip_elevation ? 8 : 0);
  }
};

inline constexpr SpatialTransform kIdentityTransform{};

// All 16 group elements in index() order.
std::array<SpatialTransform, 16> all_transforms();

// Short stable name, e.g. "rot090", "rot180_refl_eflip".
std::string transform_name(const SpatialTransform& t);

// Function composition: the returned transform applies `second` first, then
// `first`, i.e. apply(compose(a, b), d) == apply(a, apply(b, d)).
SpatialTransform compose(const SpatialTransform& first, const SpatialTransform& second);

SpatialTransform inverse(const SpatialTransform& t);

SphericalDoa transform_doa(const SpatialTransform& t, const SphericalDoa& d);

CartesianDoa transform_cartesian(const SpatialTransform& t, const CartesianDoa& d);

// The signed permutation m with (x', y', z')^T = m * (x, y, z)^T. Rows and
// columns are (x, y, z); every entry is -1, 0 or 1.
using DirectionMatrix = std::array<std::array<int, 3>, 3>;
DirectionMatrix direction_matrix(const SpatialTransform& t);

// Channel remap realizing a transform on FOA audio: output channel c is
// sign[c] * input channel source[c], in ACN order [W, Y, Z, X]. W always maps
// to itself with sign +1.
struct ChannelOp {
  std::array<int, 4> source{0, 1, 2, 3};
  std::array<int, 4> sign{1, 1, 1, 1};
};
ChannelOp channel_op_of(const SpatialTransform& t);

// Applies the channel op sample-wise. Pure swap/negate: no resampling, no
// filtering, exact in floating point.
FoaClip transform_foa(const SpatialTransform& t, const FoaClip& clip);

// Pixel-domain action on an equirectangular raster: a quarter turn is a
// modular horizontal translation by width/4 toward negative u, reflection is
// u -> width-1-u, elevation flip is v -> height-1-v. Requires width % 4 == 0.
PixelCoord transform_pixel(const SpatialTransform& t, PixelCoord p, const PanoramaSpec& spec);

// Maps every event DOA through transform_doa; other fields are untouched.
std::vector<EventAnnotation> transform_annotations(const SpatialTransform& t,
                                                   const std::vector<EventAnnotation>& events);

// Ordered set of exactly 8 distinct transforms containing the identity, used
// for eightfold channel-swap augmentation.
struct AcsSet {
  std::string name;
  std::vector<SpatialTransform> transforms;
};

// {quarter_turns 0..3} x {flip_elevation off/on}, reflection off.
AcsSet default_acs_set();

// Throws validation_error unless the set has exactly 8 distinct members
// including the identity.
void validate_acs_set(const AcsSet& set);

}  // namespace avseld
