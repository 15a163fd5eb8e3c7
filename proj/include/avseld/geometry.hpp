#pragma once

namespace avseld {

// Shared frame convention: x points front, y left, z up. Azimuth increases
// counterclockwise from front (so +90 deg is left), elevation upward.

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double d) { return d * (kPi / 180.0); }
inline double rad_to_deg(double r) { return r * (180.0 / kPi); }

// Wraps an angle in degrees into (-180, 180]. Exactly -180 maps to 180.
double wrap_azimuth_deg(double deg);

// Direction as azimuth/elevation in degrees. Azimuth is canonicalized into
// (-180, 180] on construction; elevation outside [-90, 90] is rejected.
class SphericalDoa {
 public:
  SphericalDoa() = default;
  SphericalDoa(double azimuth_deg, double elevation_deg);

  double azimuth_deg() const { return azimuth_deg_; }
  double elevation_deg() const { return elevation_deg_; }

 private:
  double azimuth_deg_ = 0.0;
  double elevation_deg_ = 0.0;
};

// Unit direction vector. Normalized on construction; the zero vector is not
// constructible.
class CartesianDoa {
 public:
  CartesianDoa(double x, double y, double z);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double dot(const CartesianDoa& o) const {
    return x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
  }

 private:
  double x_ = 1.0, y_ = 0.0, z_ = 0.0;
};

// Equirectangular panorama raster. Width covers 360 deg of azimuth (left to
// right runs from +180 down to -180), height covers 180 deg of elevation
// (top row is +90). A full-sphere video has width_px = 2 * height_px.
struct PanoramaSpec {
  int width_px = 1920;
  int height_px = 960;

  PanoramaSpec() = default;
  PanoramaSpec(int width, int height);
};

struct PixelCoord {
  int u = 0;
  int v = 0;
  bool operator==(const PixelCoord&) const = default;
};

CartesianDoa spherical_to_cartesian(const SphericalDoa& d);

// Inverse of spherical_to_cartesian. At the poles azimuth is reported as 0.
SphericalDoa cartesian_to_spherical(const CartesianDoa& c);

// Great-circle angle between two unit directions, in degrees, in [0, 180].
double angular_distance_deg(const CartesianDoa& a, const CartesianDoa& b);

// Angle at the center of pixel (u, v):
//   azimuth   = 180 - (u + 0.5) * 360 / width
//   elevation =  90 - (v + 0.5) * 180 / height
// Out-of-bounds pixels are rejected.
SphericalDoa pixel_to_spherical(PixelCoord p, const PanoramaSpec& spec);

// Nearest-pixel inverse of pixel_to_spherical. Round-tripping every pixel
// through pixel_to_spherical and back is the identity.
PixelCoord spherical_to_pixel(const SphericalDoa& d, const PanoramaSpec& spec);

}  // namespace avseld
