#pragma once

#include <complex>

#include "nfi/model.hpp"

namespace nfi {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};

/// Complex field phasors; the physical field is Re{phasor e^{-i omega t}}.
struct ComplexField {
  CVec3 e = CVec3::Zero();
  CVec3 b = CVec3::Zero();

  ComplexField& operator+=(const ComplexField& o) {
    e += o.e;
    b += o.b;
    return *this;
  }
  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator*(double s, ComplexField f) {
    f.e *= s;
    f.b *= s;
    return f;
  }
};

/// Envelope of the classical pulse at the scatterer, e^{-pi t^2 / 2 tau^2}.
inline double pulse_envelope(double t, const Pulse& pulse) {
  return std::exp(-pi * t * t / (2 * pulse.tau * pulse.tau));
}

/// Incident plane wave. With stationary = true the envelope is dropped.
inline ComplexField incident_field(const Vec3& r, double t, const Pulse& pulse, bool stationary = true) {
  const double g = stationary ? 1.0 : pulse_envelope(t, pulse);
  const cd amp = pulse.e_amplitude() * g * std::exp(I * pulse.k_in * (r.z() - t));
  ComplexField f;
  f.e = CVec3(amp, 0, 0);
  f.b = CVec3(0, amp, 0);  // e_z x E / c
  return f;
}

namespace detail {

struct DipoleGeometry {
  double rho;
  Vec3 n;     // unit vector from scatterer to field point
  Vec3 t;     // (n x e_x) x n
  Vec3 q;     // e_x - 3 n (n . e_x)
  Vec3 nxex;  // n x e_x
};

inline DipoleGeometry dipole_geometry(const Vec3& r, const Scatterer& s, double lambda) {
  const Vec3 d = r - s.r0;
  const double rho = d.norm();
  if (!(rho >= 1e-6 * lambda))
    throw Error(ErrorKind::physics, "field point coincides with the scatterer");
  DipoleGeometry g;
  g.rho = rho;
  g.n = d / rho;
  const Vec3 ex = Vec3::UnitX();
  g.nxex = g.n.cross(ex);
  g.t = g.nxex.cross(g.n);
  g.q = ex - 3 * g.n * g.n.x();
  return g;
}

inline ComplexField assemble(const DipoleGeometry& g, cd ct, cd cq, cd cb) {
  ComplexField f;
  f.e = ct * g.t.cast<cd>() + cq * g.q.cast<cd>();
  f.b = cb * g.nxex.cast<cd>();
  return f;
}

}  // namespace detail

/// Scattered field of a point dipole driven by the incident plane wave.
inline ComplexField scattered_point(const Vec3& r, const Scatterer& s, const Pulse& pulse) {
  const double k = pulse.k_in;
  const auto g = detail::dipole_geometry(r, s, pulse.wavelength());
  const double kr = k * g.rho;
  const cd pre = k * k * k * s.chi0 * pulse.e_amplitude() / (2 * pi) * std::exp(I * k * (g.rho + s.r0.z()));
  const cd ct = pre / kr;
  const cd cq = pre * (I * kr - 1.0) / (kr * kr * kr);
  const cd cb = I * pre * (1.0 - I * kr) / (kr * kr);
  return detail::assemble(g, ct, cq, cb);
}

/// Scattered field of the exponentially smeared dipole of size a0.
///
/// Closed form of the mode integral over the regularized polarization density; both the
/// coupling to the incident wave and the re-radiation carry the form factor xi_k.
inline ComplexField scattered_regularized(const Vec3& r, const Scatterer& s, const Pulse& pulse) {
  if (s.a0 == 0) return scattered_point(r, s, pulse);
  const double k = pulse.k_in;
  const double a = s.a0;
  const auto g = detail::dipole_geometry(r, s, pulse.wavelength());
  const double rho = g.rho;
  const double kr = k * rho;
  const double xi = 1 / std::pow(1 + 0.25 * a * a * k * k, 2);
  const cd pre = k * k * k * s.chi0 * pulse.e_amplitude() * xi * xi / (2 * pi) * std::exp(I * k * s.r0.z());
  const cd wave = std::exp(I * kr);
  const double screen = std::exp(-2 * rho / a);
  const double e1 = 4 * rho / (a * a * a * k * k) + rho / a - 1;
  const double e3 = 1 + 2 * rho / a + 2 * rho * rho / (a * a) + 0.5 * kr * kr;
  const cd ct = pre * (wave + e1 * screen) / kr;
  const cd cq = pre * ((I * kr - 1.0) * wave + e3 * screen) / (kr * kr * kr);
  const cd cb = I * pre * ((1.0 - I * kr) * wave - e3 * screen) / (kr * kr);
  return detail::assemble(g, ct, cq, cb);
}

/// Time-averaged Poynting vector split into its four interference terms (mu0 = 1).
struct PoyntingTerms {
  Vec3 in_in = Vec3::Zero();
  Vec3 sc_in = Vec3::Zero();  ///< Re{E_sc x B_in*}/2
  Vec3 in_sc = Vec3::Zero();  ///< Re{E_in x B_sc*}/2
  Vec3 sc_sc = Vec3::Zero();

  Vec3 total() const { return in_in + sc_in + in_sc + sc_sc; }
  Vec3 scatterer_dependent() const { return sc_in + in_sc + sc_sc; }
};

inline Vec3 poynting_avg(const ComplexField& f) {
  return 0.5 * f.e.cross(f.b.conjugate()).real();
}

inline PoyntingTerms poynting_terms(const ComplexField& in, const ComplexField& sc) {
  PoyntingTerms p;
  p.in_in = 0.5 * in.e.cross(in.b.conjugate()).real();
  p.sc_in = 0.5 * sc.e.cross(in.b.conjugate()).real();
  p.in_sc = 0.5 * in.e.cross(sc.b.conjugate()).real();
  p.sc_sc = 0.5 * sc.e.cross(sc.b.conjugate()).real();
  return p;
}

}  // namespace nfi
