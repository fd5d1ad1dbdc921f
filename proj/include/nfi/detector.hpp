#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nfi/model.hpp"

namespace nfi {

struct Pixel {
  Vec3 position;
  Vec3 normal;  ///< unit normal; counts are the flux along it
  double area;
};

enum class GeometryKind { planar, hemisphere, sphere };
enum class Orientation { forward, backward };

struct PixelGrid {
  std::vector<Pixel> pixels;
  GeometryKind kind = GeometryKind::planar;
  double z = 0;           ///< planar: signed plane position
  double half_width = 0;  ///< planar: half side of the square
  double radius = 0;      ///< hemisphere/sphere
  Orientation orientation = Orientation::forward;
  double solid_angle = 0;  ///< requested coverage as seen from the origin
  int refinement = 1;
  double wavelength = 2 * pi;  ///< resolution reference

  std::size_t size() const { return pixels.size(); }

  double total_area() const {
    double s = 0;
    for (const auto& p : pixels) s += p.area;
    return s;
  }

  /// Sum of pixel solid angles seen from the origin.
  double pixel_solid_angle() const {
    double s = 0;
    for (const auto& p : pixels) {
      const double r = p.position.norm();
      s += p.area * std::abs(p.normal.dot(p.position)) / (r * r * r);
    }
    return s;
  }
};

/// Solid angle of a centered square of half width a at distance |z|.
inline double square_solid_angle(double a, double z) {
  return 4 * std::atan(a * a / (std::abs(z) * std::sqrt(2 * a * a + z * z)));
}

/// Half width of the centered square subtending `omega` at distance |z|.
inline double square_half_width(double omega, double z) {
  if (!(omega > 0) || !(omega < 2 * pi)) throw Error(ErrorKind::geometry, "planar solid angle must lie in (0, 2 pi)");
  if (z == 0) throw Error(ErrorKind::geometry, "planar detector cannot sit at z = 0");
  const double q = std::tan(omega / 4);
  return std::abs(z) * std::sqrt(q * q + q * std::sqrt(q * q + 1));
}

/// Maximum pixel count; larger requests raise a resource error.
inline constexpr std::size_t max_pixels = 50'000'000;

namespace detail {

/// Cell edges on [0, end] with spacing eta * sqrt(s^2 + c^2) (a sinh map), capped at h_max.
inline std::vector<double> graded_edges(double end, double c, double eta, double h_max) {
  std::vector<double> e{0.0};
  while (e.back() < end) {
    const double s = e.back();
    const double h = std::min(h_max, eta * std::sqrt(s * s + c * c));
    e.push_back(s + h);
    if (e.size() > max_pixels) throw Error(ErrorKind::resource, "radial cell count exceeds limit");
  }
  const double scale = end / e.back();
  for (auto& x : e) x *= scale;
  return e;
}

}  // namespace detail

/// Square detector in the plane z with normal +e_z for either sign of z.
///
/// Cells are polar sectors clipped to the square: the radial coordinate runs to the square
/// boundary S(phi) in each direction, is sinh-graded on the scale |z| near the axis and capped
/// at a fraction of the wavelength so the far-zone interference fringes are resolved.
inline PixelGrid planar_grid(double z, double solid_angle, int refinement = 1, double wavelength = 2 * pi) {
  if (refinement < 1) throw Error(ErrorKind::configuration, "refinement must be positive");
  const double a = square_half_width(solid_angle, z);
  PixelGrid g;
  g.kind = GeometryKind::planar;
  g.z = z;
  g.half_width = a;
  g.solid_angle = solid_angle;
  g.refinement = refinement;
  g.wavelength = wavelength;
  g.orientation = z > 0 ? Orientation::forward : Orientation::backward;

  const double smax = a * std::sqrt(2.0);
  const auto base = detail::graded_edges(smax, std::abs(z), 0.06, wavelength / 8);
  std::vector<double> u;
  for (std::size_t i = 0; i + 1 < base.size(); ++i)
    for (int m = 0; m < refinement; ++m) u.push_back((base[i] + (base[i + 1] - base[i]) * m / refinement) / smax);
  u.push_back(1.0);
  const int per_octant = 8 * refinement;
  const int nphi = 8 * per_octant;
  if (double(nphi) * double(u.size() - 1) > double(max_pixels))
    throw Error(ErrorKind::resource, "planar pixel count exceeds limit");

  g.pixels.reserve(static_cast<std::size_t>(nphi) * (u.size() - 1));
  const double dphi = 2 * pi / nphi;
  for (int j = 0; j < nphi; ++j) {
    const double p1 = j * dphi, p2 = (j + 1) * dphi, pm = 0.5 * (p1 + p2);
    // Reduce to the sector |phi'| <= pi/4 around the nearest axis, where S = a / cos(phi').
    const int octant = j / per_octant;
    const double axis = pi / 2 * std::floor((octant + 1) / 2.0);
    const double t1 = std::tan(p1 - axis), t2 = std::tan(p2 - axis);
    const double sector = a * a * (t2 - t1);
    const double s_mid = a / std::cos(pm - axis);
    const double c = std::cos(pm), s = std::sin(pm);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      const double um = 0.5 * (u[i] + u[i + 1]);
      Pixel px;
      px.position = Vec3(um * s_mid * c, um * s_mid * s, z);
      px.normal = Vec3::UnitZ();
      px.area = 0.5 * (u[i + 1] * u[i + 1] - u[i] * u[i]) * sector;
      g.pixels.push_back(px);
    }
  }
  return g;
}

/// Spherical cap around +e_z (forward) or -e_z (backward), equal-solid-angle cells in (cos theta, phi).
///
/// Normals point along the incident propagation side so the unscattered flux is positive:
/// outward for the forward cap and inward for the backward cap.
inline PixelGrid hemisphere_grid(double radius, Orientation orientation, double solid_angle, int refinement = 1,
                                 double wavelength = 2 * pi) {
  if (!(radius > 0)) throw Error(ErrorKind::geometry, "hemisphere radius must be positive");
  if (!(solid_angle > 0) || !(solid_angle <= 2 * pi)) throw Error(ErrorKind::geometry, "cap solid angle must lie in (0, 2 pi]");
  if (refinement < 1) throw Error(ErrorKind::configuration, "refinement must be positive");
  PixelGrid g;
  g.kind = GeometryKind::hemisphere;
  g.radius = radius;
  g.orientation = orientation;
  g.solid_angle = solid_angle;
  g.refinement = refinement;
  g.wavelength = wavelength;

  const double mu_min = 1 - solid_angle / (2 * pi);
  const double kr = 2 * pi * radius / wavelength;
  const int nmu = refinement * std::max(48, static_cast<int>(std::ceil(2 * kr * (1 - mu_min))));
  const int nphi = 64 * refinement;
  if (double(nmu) * nphi > double(max_pixels)) throw Error(ErrorKind::resource, "hemisphere pixel count exceeds limit");
  const double sign = orientation == Orientation::forward ? 1.0 : -1.0;
  const double dmu = (1 - mu_min) / nmu, dphi = 2 * pi / nphi;
  g.pixels.reserve(static_cast<std::size_t>(nmu) * nphi);
  for (int i = 0; i < nmu; ++i) {
    const double mu = mu_min + (i + 0.5) * dmu;
    const double st = std::sqrt(1 - mu * mu);
    for (int j = 0; j < nphi; ++j) {
      const double ph = (j + 0.5) * dphi;
      const Vec3 n(st * std::cos(ph), st * std::sin(ph), sign * mu);
      g.pixels.push_back({radius * n, sign * n, radius * radius * dmu * dphi});
    }
  }
  return g;
}

/// Full sphere with Gauss-Legendre nodes in cos theta and a uniform azimuth; outward normals.
/// Used for flux balances where spectral accuracy matters.
inline PixelGrid sphere_quadrature(double radius, int n_mu, int n_phi) {
  PixelGrid g;
  g.kind = GeometryKind::sphere;
  g.radius = radius;
  g.solid_angle = 4 * pi;
  // Gauss-Legendre nodes by Newton iteration on P_n.
  std::vector<double> x(n_mu), w(n_mu);
  for (int i = 0; i < n_mu; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n_mu + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= n_mu; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n_mu * (t * p1 - p0) / (t * t - 1);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = t;
    w[i] = 2 / ((1 - t * t) * dp * dp);
  }
  const double dphi = 2 * pi / n_phi;
  for (int i = 0; i < n_mu; ++i) {
    const double st = std::sqrt(1 - x[i] * x[i]);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = j * dphi;
      const Vec3 n(st * std::cos(ph), st * std::sin(ph), x[i]);
      g.pixels.push_back({radius * n, n, radius * radius * w[i] * dphi});
    }
  }
  return g;
}

/// Same geometry at twice the linear pixel density.
inline PixelGrid refine(const PixelGrid& g) {
  switch (g.kind) {
    case GeometryKind::planar: return planar_grid(g.z, g.solid_angle, g.refinement * 2, g.wavelength);
    case GeometryKind::hemisphere:
      return hemisphere_grid(g.radius, g.orientation, g.solid_angle, g.refinement * 2, g.wavelength);
    case GeometryKind::sphere: break;
  }
  throw Error(ErrorKind::configuration, "sphere quadrature grids are refined by their node counts");
}

}  // namespace nfi
