#include "avseld/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "avseld/errors.hpp"

namespace avseld {

double wrap_azimuth_deg(double deg) {
  double r = std::fmod(deg + 180.0, 360.0);
  if (r <= 0.0) r += 360.0;
  return r - 180.0;
}

SphericalDoa::SphericalDoa(double azimuth_deg, double elevation_deg)
    : azimuth_deg_(wrap_azimuth_deg(azimuth_deg)), elevation_deg_(elevation_deg) {
  if (!(elevation_deg >= -90.0 && elevation_deg <= 90.0)) {
    throw validation_error("elevation out of [-90, 90]: " + std::to_string(elevation_deg));
  }
}

CartesianDoa::CartesianDoa(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 1e-12)) {
    throw validation_error("zero-length direction vector");
  }
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

PanoramaSpec::PanoramaSpec(int width, int height) : width_px(width), height_px(height) {
  if (width < 2 || height < 2) {
    throw validation_error("panorama must be at least 2x2 pixels");
  }
}

CartesianDoa spherical_to_cartesian(const SphericalDoa& d) {
  const double az = deg_to_rad(d.azimuth_deg());
  const double el = deg_to_rad(d.elevation_deg());
  const double ce = std::cos(el);
  return CartesianDoa(ce * std::cos(az), ce * std::sin(az), std::sin(el));
}

SphericalDoa cartesian_to_spherical(const CartesianDoa& c) {
  const double z = std::clamp(c.z(), -1.0, 1.0);
  const double el = rad_to_deg(std::asin(z));
  // Azimuth degenerates at the poles; canonical form uses 0 there.
  double az = 0.0;
  if (c.x() != 0.0 || c.y() != 0.0) {
    az = wrap_azimuth_deg(rad_to_deg(std::atan2(c.y(), c.x())));
  }
  return SphericalDoa(az, el);
}

double angular_distance_deg(const CartesianDoa& a, const CartesianDoa& b) {
  return rad_to_deg(std::acos(std::clamp(a.dot(b), -1.0, 1.0)));
}

SphericalDoa pixel_to_spherical(PixelCoord p, const PanoramaSpec& spec) {
  if (p.u < 0 || p.u >= spec.width_px || p.v < 0 || p.v >= spec.height_px) {
    throw validation_error("pixel (" + std::to_string(p.u) + ", " + std::to_string(p.v) +
                           ") outside " + std::to_string(spec.width_px) + "x" +
                           std::to_string(spec.height_px) + " panorama");
  }
  const double az = 180.0 - (p.u + 0.5) * 360.0 / spec.width_px;
  const double el = 90.0 - (p.v + 0.5) * 180.0 / spec.height_px;
  return SphericalDoa(wrap_azimuth_deg(az), el);
}

PixelCoord spherical_to_pixel(const SphericalDoa& d, const PanoramaSpec& spec) {
  // Pixel u covers the continuous band [u, u+1) of (180 - az) * w / 360, so
  // flooring selects the pixel whose center is nearest. Azimuth is already in
  // (-180, 180], which keeps the band index in [0, w); the modulo is a guard
  // against last-ulp spills.
  const double cu = (180.0 - d.azimuth_deg()) * spec.width_px / 360.0;
  const double cv = (90.0 - d.elevation_deg()) * spec.height_px / 180.0;
  long u = static_cast<long>(std::floor(cu));
  long v = static_cast<long>(std::floor(cv));
  u %= spec.width_px;
  if (u < 0) u += spec.width_px;
  v = std::clamp(v, 0L, static_cast<long>(spec.height_px - 1));
  return PixelCoord{static_cast<int>(u), static_cast<int>(v)};
}

}  // namespace avseld
