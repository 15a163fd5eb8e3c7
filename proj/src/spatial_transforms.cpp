#include "avseld/spatial_transforms.hpp"

#include <algorithm>
#include <set>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

void check_transform(const SpatialTransform& t) {
  if (t.quarter_turns < 0 || t.quarter_turns > 3) {
    throw validation_error("quarter_turns out of 0..3: " + std::to_string(t.quarter_turns));
  }
}

// Applies the direction map to an integer axis vector. Order matters only
// between reflection and rotation; the elevation flip commutes with both.
void apply_int(const SpatialTransform& t, int& x, int& y, int& z) {
  if (t.flip_elevation) z = -z;
  if (t.reflect_azimuth) y = -y;
  for (int q = 0; q < t.quarter_turns; ++q) {
    const int nx = -y;
    const int ny = x;
    x = nx;
    y = ny;
  }
}

}  // namespace

std::array<SpatialTransform, 16> all_transforms() {
  std::array<SpatialTransform, 16> out{};
  for (int i = 0; i < 16; ++i) {
    out[i] = SpatialTransform{i % 4, (i & 4) != 0, (i & 8) != 0};
  }
  return out;
}

std::string transform_name(const SpatialTransform& t) {
  check_transform(t);
  static const char* kRot[4] = {"rot000", "rot090", "rot180", "rot270"};
  std::string name = kRot[t.quarter_turns];
  if (t.reflect_azimuth) name += "_refl";
  if (t.flip_elevation) name += "_eflip";
  return name;
}

SpatialTransform compose(const SpatialTransform& first, const SpatialTransform& second) {
  check_transform(first);
  check_transform(second);
  // Azimuth maps a(t): phi -> s*phi + 90*q compose as
  // s = s1*s2, q = q1 + s1*q2 (mod 4).
  const int s1 = first.reflect_azimuth ? -1 : 1;
  int q = first.quarter_turns + s1 * second.quarter_turns;
  q = ((q % 4) + 4) % 4;
  return SpatialTransform{q, first.reflect_azimuth != second.reflect_azimuth,
                          first.flip_elevation != second.flip_elevation};
}

SpatialTransform inverse(const SpatialTransform& t) {
  check_transform(t);
  // phi -> s*phi + 90*q inverts to phi -> s*phi - 90*s*q.
  const int q = t.reflect_azimuth ? t.quarter_turns : (4 - t.quarter_turns) % 4;
  return SpatialTransform{q, t.reflect_azimuth, t.flip_elevation};
}

SphericalDoa transform_doa(const SpatialTransform& t, const SphericalDoa& d) {
  check_transform(t);
  const double s = t.reflect_azimuth ? -1.0 : 1.0;
  const double az = wrap_azimuth_deg(s * d.azimuth_deg() + 90.0 * t.quarter_turns);
  const double el = t.flip_elevation ? -d.elevation_deg() : d.elevation_deg();
  return SphericalDoa(az, el);
}

CartesianDoa transform_cartesian(const SpatialTransform& t, const CartesianDoa& d) {
  const DirectionMatrix m = direction_matrix(t);
  const double in[3] = {d.x(), d.y(), d.z()};
  double out[3] = {0.0, 0.0, 0.0};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (m[r][c] != 0) out[r] += m[r][c] * in[c];
    }
  }
  return CartesianDoa(out[0], out[1], out[2]);
}

DirectionMatrix direction_matrix(const SpatialTransform& t) {
  check_transform(t);
  DirectionMatrix m{};
  for (int c = 0; c < 3; ++c) {
    int v[3] = {0, 0, 0};
    v[c] = 1;
    apply_int(t, v[0], v[1], v[2]);
    for (int r = 0; r < 3; ++r) m[r][c] = v[r];
  }
  return m;
}

ChannelOp channel_op_of(const SpatialTransform& t) {
  const DirectionMatrix m = direction_matrix(t);
  // FOA dipole channels carry the direction components directly (SN3D):
  // Y <-> y, Z <-> z, X <-> x. W is omnidirectional and never changes.
  constexpr int kChannelOfComponent[3] = {kChannelX, kChannelY, kChannelZ};
  constexpr int kComponentOfChannel[4] = {-1, 1, 2, 0};
  ChannelOp op;
  for (int ch = 1; ch < 4; ++ch) {
    const int r = kComponentOfChannel[ch];
    for (int c = 0; c < 3; ++c) {
      if (m[r][c] != 0) {
        op.source[ch] = kChannelOfComponent[c];
        op.sign[ch] = m[r][c];
        break;
      }
    }
  }
  return op;
}

FoaClip transform_foa(const SpatialTransform& t, const FoaClip& clip) {
  const std::size_t n = clip.channels[0].size();
  for (const auto& ch : clip.channels) {
    if (ch.size() != n) throw validation_error("FOA channels have unequal lengths");
  }
  const ChannelOp op = channel_op_of(t);
  FoaClip out;
  out.sample_rate = clip.sample_rate;
  for (int ch = 0; ch < 4; ++ch) {
    const std::vector<double>& src = clip.channels[op.source[ch]];
    std::vector<double>& dst = out.channels[ch];
    dst.resize(n);
    if (op.sign[ch] > 0) {
      std::copy(src.begin(), src.end(), dst.begin());
    } else {
      std::transform(src.begin(), src.end(), dst.begin(), [](double s) { return -s; });
    }
  }
  return out;
}

PixelCoord transform_pixel(const SpatialTransform& t, PixelCoord p, const PanoramaSpec& spec) {
  check_transform(t);
  if (spec.width_px % 4 != 0) {
    throw validation_error("panorama width " + std::to_string(spec.width_px) +
                           " is not divisible by 4; quarter-turn pixel shifts are undefined");
  }
  if (p.u < 0 || p.u >= spec.width_px || p.v < 0 || p.v >= spec.height_px) {
    throw validation_error("pixel out of bounds");
  }
  long u = p.u;
  if (t.reflect_azimuth) u = spec.width_px - 1 - u;
  u -= static_cast<long>(t.quarter_turns) * (spec.width_px / 4);
  u %= spec.width_px;
  if (u < 0) u += spec.width_px;
  int v = p.v;
  if (t.flip_elevation) v = spec.height_px - 1 - v;
  return PixelCoord{static_cast<int>(u), v};
}

std::vector<EventAnnotation> transform_annotations(const SpatialTransform& t,
                                                   const std::vector<EventAnnotation>& events) {
  std::vector<EventAnnotation> out;
  out.reserve(events.size());
  for (const EventAnnotation& e : events) {
    EventAnnotation m = e;
    m.doa = transform_doa(t, e.doa);
    out.push_back(m);
  }
  return out;
}

AcsSet default_acs_set() {
  AcsSet set;
  set.name = "default";
  for (int flip = 0; flip < 2; ++flip) {
    for (int q = 0; q < 4; ++q) {
      set.transforms.push_back(SpatialTransform{q, false, flip != 0});
    }
  }
  return set;
}

void validate_acs_set(const AcsSet& set) {
  if (set.transforms.size() != 8) {
    throw validation_error("ACS set must contain exactly 8 transforms, got " +
                           std::to_string(set.transforms.size()));
  }
  std::set<int> seen;
  bool has_identity = false;
  for (const SpatialTransform& t : set.transforms) {
    check_transform(t);
    if (!seen.insert(t.index()).second) {
      throw validation_error("ACS set contains duplicate transform " + transform_name(t));
    }
    if (t == kIdentityTransform) has_identity = true;
  }
  if (!has_identity) throw validation_error("ACS set must contain the identity transform");
}

}  // namespace avseld
