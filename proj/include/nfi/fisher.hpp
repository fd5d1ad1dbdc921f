#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "nfi/detector.hpp"
#include "nfi/fields.hpp"
#include "nfi/parallel.hpp"
#include "nfi/quadrature.hpp"

namespace nfi {

enum class FieldModel { point, regularized };

inline ComplexField scattered(const Vec3& r, const Scatterer& s, const Pulse& pulse, FieldModel model) {
  return model == FieldModel::point ? scattered_point(r, s, pulse) : scattered_regularized(r, s, pulse);
}

/// Flux density e_n . S of the total stationary field at a pixel.
inline double pixel_intensity(const Pixel& px, const Scatterer& s, const Pulse& pulse, FieldModel model) {
  const auto in = incident_field(px.position, 0, pulse);
  const auto sc = scattered(px.position, s, pulse, model);
  return px.normal.dot(poynting_terms(in, sc).total());
}

/// Expected photon count n = (e_n . S) tau dA / (hbar omega).
inline double mean_counts(const Pixel& px, const Scatterer& s, const Pulse& pulse, FieldModel model = FieldModel::point) {
  const double i = pixel_intensity(px, s, pulse, model);
  if (i < 0) throw Error(ErrorKind::physics, "negative projected flux at a detector pixel");
  return i * pulse.tau * px.area / pulse.k_in;
}

/// Intensity and its gradient with respect to (chi0, x0, y0, z0).
struct IntensityGradient {
  double intensity = 0;
  std::array<double, 4> d{};
};

/// The chi0 derivative is exact (the scattered field is linear in chi0); position derivatives
/// use central differences of the scatterer-dependent Poynting terms with step h.
inline IntensityGradient intensity_gradient(const Pixel& px, const Scatterer& s, const Pulse& pulse, FieldModel model,
                                            double h) {
  const auto in = incident_field(px.position, 0, pulse);
  const Vec3& n = px.normal;
  IntensityGradient g;

  const double chi_eff = s.chi0 > 0 ? s.chi0 : 1.0;
  Scatterer unit = s;
  unit.chi0 = chi_eff;
  const auto terms = poynting_terms(in, scattered(px.position, unit, pulse, model));
  const double ratio = s.chi0 / chi_eff;
  const double cross = n.dot(terms.sc_in + terms.in_sc);
  const double scsc = n.dot(terms.sc_sc);
  g.intensity = n.dot(terms.in_in) + ratio * cross + ratio * ratio * scsc;
  g.d[0] = cross / chi_eff + 2 * ratio * scsc / chi_eff;

  for (int j = 0; j < 3; ++j) {
    Scatterer sp = s, sm = s;
    sp.r0[j] += h;
    sm.r0[j] -= h;
    const double tp = n.dot(poynting_terms(in, scattered(px.position, sp, pulse, model)).scatterer_dependent());
    const double tm = n.dot(poynting_terms(in, scattered(px.position, sm, pulse, model)).scatterer_dependent());
    g.d[j + 1] = (tp - tm) / (2 * h);
  }
  return g;
}

/// Default finite-difference step for a detector geometry.
inline double default_fd_step(const PixelGrid& grid) {
  const double scale = grid.kind == GeometryKind::planar ? std::abs(grid.z) : grid.radius;
  return 1e-4 * std::min(grid.wavelength, scale);
}

/// Classical Fisher information of independent Poisson pixel counts,
/// I_jl = sum (1/n)(dn/dtheta_j)(dn/dtheta_l).
inline InfoMatrix fi_matrix(const PixelGrid& grid, const Scatterer& s, const Pulse& pulse,
                            FieldModel model = FieldModel::point, double h = 0) {
  if (h <= 0) h = default_fd_step(grid);
  constexpr std::size_t chunk = 2048;
  const std::size_t nchunks = (grid.size() + chunk - 1) / chunk;
  std::vector<std::array<double, 10>> partial(nchunks);
  const double scale = pulse.tau / pulse.k_in;

  parallel_for(nchunks, [&](std::size_t c) {
    std::array<double, 10> acc{};
    const std::size_t end = std::min(grid.size(), (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const Pixel& px = grid.pixels[i];
      const auto g = intensity_gradient(px, s, pulse, model, h);
      if (!(g.intensity > 0))
        throw Error(ErrorKind::physics, "non-positive intensity at pixel " + std::to_string(i));
      const double w = scale * px.area / g.intensity;
      int m = 0;
      for (int j = 0; j < 4; ++j)
        for (int l = j; l < 4; ++l) acc[m++] += w * g.d[j] * g.d[l];
    }
    partial[c] = acc;
  });

  InfoMatrix fi;
  fi.kind = InfoKind::classical;
  std::vector<double> column(nchunks);
  int m = 0;
  for (int j = 0; j < 4; ++j)
    for (int l = j; l < 4; ++l, ++m) {
      for (std::size_t c = 0; c < nchunks; ++c) column[c] = partial[c][m];
      fi.entries(j, l) = fi.entries(l, j) = pairwise_sum(column.data(), nchunks);
    }
  return fi;
}

inline double sigma_total(const Scatterer& s, const Pulse& pulse) {
  const double k = pulse.k_in;
  return 2 * k * k * k * k * s.chi0 * s.chi0 / (3 * pi);
}

/// Number of scattered photons N = sigma_tot Phi.
inline double n_scattered(const Scatterer& s, const Pulse& pulse) { return sigma_total(s, pulse) * pulse.phi; }

struct CrbResult {
  std::array<double, 4> sigma{};       ///< sqrt of the diagonal of the inverse FI
  std::array<double, 4> normalized{};  ///< sqrt(N) sigma / chi0 and sqrt(N) sigma / lambda
  double condition_number = 0;
};

/// Inverts the FI after diagonal scaling; the reported condition number is that of the
/// scaled (correlation) matrix, which is what limits the inversion accuracy.
inline CrbResult crb_from_fi(const InfoMatrix& fi, double nsc, double chi0, double wavelength) {
  const Mat4 sym = 0.5 * (fi.entries + fi.entries.transpose());
  CrbResult r;
  Eigen::Vector4d d;
  for (int j = 0; j < 4; ++j) {
    if (!(sym(j, j) > 0)) throw Error(ErrorKind::degeneracy, "information matrix has a non-positive diagonal entry");
    d[j] = 1 / std::sqrt(sym(j, j));
  }
  const Mat4 corr = d.asDiagonal() * sym * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat4> es(corr, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  const double small = ev.minCoeff();
  r.condition_number = small > 0 ? ev.maxCoeff() / small : INFINITY;
  if (!(small > 0) || r.condition_number > 1e12)
    throw Error(ErrorKind::degeneracy, "information matrix is singular or ill-conditioned (condition number " +
                                           std::to_string(r.condition_number) + ")");
  const Mat4 inv = d.asDiagonal() * corr.fullPivLu().inverse() * d.asDiagonal();
  for (int l = 0; l < 4; ++l) {
    r.sigma[l] = std::sqrt(inv(l, l));
    r.normalized[l] = std::sqrt(nsc) * r.sigma[l] / (l == 0 ? chi0 : wavelength);
  }
  return r;
}

}  // namespace nfi
