#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nfi/fields.hpp"
#include "nfi/fisher.hpp"
#include "nfi/parallel.hpp"
#include "nfi/quadrature.hpp"

namespace nfi {

enum class Gauge { pzw, coulomb };

inline const char* gauge_name(Gauge g) { return g == Gauge::pzw ? "pzw" : "coulomb"; }

/// Linear response chi(omega) = chi0 omega0^2 / (omega0^2 - omega^2), so chi(0) = chi0.
inline double chi_response(double omega, const Scatterer& s) {
  const double w0 = s.omega0;
  if (omega == w0 || omega == -w0) throw Error(ErrorKind::physics, "response evaluated exactly on resonance");
  return derived_d0_sq(s) * w0 / (w0 * w0 - omega * omega);
}

/// Form factor of the exponential polarization density, 1/[1 + (a0 k / 2)^2]^2.
inline double xi_regularizer(double k, double a0) {
  const double u = 0.25 * a0 * a0 * k * k;
  return 1 / ((1 + u) * (1 + u));
}

/// Numerical settings of the frequency integrals.
struct QuadratureSettings {
  double d_over_k0 = 2.5e-3;
  double delta = 3.8e-2;
  double kmax_over_k0 = 1.1e3;
  std::size_t band_nodes = 2001;   ///< nodes of the uniform grid across the pulse band
  double band_halfwidth = 16;      ///< band half width in units of 1/(c tau)
};

/// Gaussian spectrum alpha(k) = N exp(-(k - k_in)^2 (c tau)^2 / 2 pi) / (i sqrt k), normalized so
/// that (1/2 pi) int |alpha|^2 dk equals the fluence.
struct SpectralPulse {
  double k_in = 1;
  double ctau = 100;
  double phi = 1;
  double norm = 0;
  Grid band;

  std::complex<double> amplitude(double k) const {
    if (k <= 0) return 0;
    const double x = k - k_in;
    return std::complex<double>(0, -1) * norm * std::exp(-x * x * ctau * ctau / (2 * pi)) / std::sqrt(k);
  }

  double fluence() const {
    std::vector<double> v(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) v[i] = std::norm(amplitude(band.nodes[i]));
    return integrate(band, v) / (2 * pi);
  }

  static SpectralPulse make(const Pulse& pulse, const QuadratureSettings& q = {}) {
    pulse.validate();
    SpectralPulse sp;
    sp.k_in = pulse.k_in;
    sp.ctau = pulse.tau;
    sp.phi = pulse.phi;
    const double hw = q.band_halfwidth / sp.ctau;
    const double lo = std::max(sp.k_in - hw, 1e-3 * sp.k_in);
    sp.band = uniform_grid(lo, sp.k_in + hw, q.band_nodes);
    sp.norm = 1;
    sp.norm = std::sqrt(sp.phi / sp.fluence());
    return sp;
  }
};

/// Everything the frequency integrals need, precomputed once per scatterer and pulse.
struct QuantumModel {
  Scatterer scatterer;
  Pulse pulse;
  SpectralPulse spectrum;
  SinhGrid pgrid;
  std::vector<double> k_base;  ///< sqrt(k) xi_k chi(k) on the band
  std::vector<std::complex<double>> alpha;  ///< alpha(k) on the band

  static QuantumModel make(const Scatterer& s, const Pulse& pulse, const QuadratureSettings& q = {}) {
    s.validate();
    QuantumModel m;
    m.scatterer = s;
    m.pulse = pulse;
    m.spectrum = SpectralPulse::make(pulse, q);
    if (!(m.spectrum.band.upper() < s.omega0))
      throw Error(ErrorKind::physics, "scatterer resonance lies inside the pulse band");
    m.pgrid = build_sinh_grid(pulse.k_in, q.d_over_k0 * pulse.k_in, q.delta, q.kmax_over_k0 * pulse.k_in);
    const auto& band = m.spectrum.band;
    m.k_base.resize(band.size());
    m.alpha.resize(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) {
      const double k = band.nodes[i];
      m.k_base[i] = std::sqrt(k) * xi_regularizer(k, s.a0) * chi_response(k, s);
      m.alpha[i] = m.spectrum.amplitude(k);
    }
    return m;
  }

  /// sqrt(p) xi_p chi(p) alpha(p) e^{-ipt}, zero outside the band.
  std::complex<double> pole_value(double p, double t) const {
    if (p <= spectrum.band.lower() || p >= spectrum.band.upper()) return 0;
    const double base = std::sqrt(p) * xi_regularizer(p, scatterer.a0) * chi_response(p, scatterer);
    return base * spectrum.amplitude(p) * std::exp(std::complex<double>(0, -p * t));
  }
};

/// f1, f2, f3 on the p grid at one time.
struct FTable {
  std::vector<std::complex<double>> f1, f2, f3;
};

namespace detail {

struct BandSamples {
  std::vector<std::complex<double>> h1, h2, c1, c2;
};

inline BandSamples band_samples(const QuantumModel& m, double t, Gauge gauge) {
  const auto& band = m.spectrum.band;
  const std::size_t n = band.size();
  BandSamples b;
  b.h1.resize(n);
  b.h2.resize(n);
  b.c1.resize(n);
  b.c2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = band.nodes[i];
    const std::complex<double> a = m.alpha[i] * std::exp(std::complex<double>(0, -k * t));
    const double w = gauge == Gauge::coulomb ? k : 1.0;  // the Coulomb kernels carry k/p
    b.h2[i] = w * m.k_base[i] * a;
    b.c2[i] = w * m.k_base[i] * std::conj(a);
    b.h1[i] = k * b.h2[i];
    b.c1[i] = k * b.c2[i];
  }
  return b;
}

}  // namespace detail

/// The three frequency integrals at wavenumber p and time t.
///
/// PZW: f1 = p^{1/2} xi_p int dk/2pi k^{3/2} xi_k [chi a*/(k+p) - chi a/(k-p+i0)],
///      f2 = p^{3/2} xi_p int dk/2pi k^{1/2} xi_k [chi a*/(k+p) + chi a/(k-p+i0)], f3 = f2/(p chi0).
/// Coulomb: an extra k/p inside the integrals and an overall sign on the non-resonant pieces.
inline std::array<std::complex<double>, 3> f_functions(double p, double t, const QuantumModel& m, Gauge gauge,
                                                       const detail::BandSamples* pre = nullptr) {
  using cd = std::complex<double>;
  if (p <= 0) return {cd{}, cd{}, cd{}};
  detail::BandSamples local;
  if (!pre) {
    local = detail::band_samples(m, t, gauge);
    pre = &local;
  }
  const auto& band = m.spectrum.band;
  cd plus1{}, plus2{};
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double w = band.weights[i] / (band.nodes[i] + p);
    plus1 += w * pre->c1[i];
    plus2 += w * pre->c2[i];
  }
  const cd hp = m.pole_value(p, t) * (gauge == Gauge::coulomb ? p : 1.0);
  const cd pv1 = pv_integrate_sampled(band, pre->h1, p * hp, p).total();
  const cd pv2 = pv_integrate_sampled(band, pre->h2, hp, p).total();
  const double xi = xi_regularizer(p, m.scatterer.a0);
  const double sp = std::sqrt(p);
  cd f1, f2;
  if (gauge == Gauge::pzw) {
    f1 = sp * xi / (2 * pi) * (plus1 - pv1);
    f2 = p * sp * xi / (2 * pi) * (plus2 + pv2);
  } else {
    f1 = xi / (sp * 2 * pi) * (-plus1 + pv1);
    f2 = sp * xi / (2 * pi) * (-plus2 - pv2);
  }
  const double chi0 = m.scatterer.chi0;
  const cd f3 = chi0 > 0 ? f2 / (p * chi0) : cd{};
  return {f1, f2, f3};
}

inline FTable f_table(const QuantumModel& m, double t, Gauge gauge) {
  const auto pre = detail::band_samples(m, t, gauge);
  const std::size_t n = m.pgrid.size();
  FTable tab;
  tab.f1.resize(n);
  tab.f2.resize(n);
  tab.f3.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const auto f = f_functions(m.pgrid.nodes[i], t, m, gauge, &pre);
    tab.f1[i] = f[0];
    tab.f2[i] = f[1];
    tab.f3[i] = f[2];
  });
  return tab;
}

/// Radial covariance kernels at r0 = 0 with the polarization factors stripped:
/// dXi = chi0 w0 sqrt(p'p) xi' xi / ((p'+w0)(p+w0)),
/// Ups = -chi0 w0 sqrt(p'p) xi' xi / (p'+p) [1/(p'+w0) + 1/(p+w0)].
inline std::array<double, 2> covariance_kernels(double pp, double p, const Scatterer& s) {
  const double w0 = s.omega0;
  const double c = derived_d0_sq(s) * std::sqrt(pp * p) * xi_regularizer(pp, s.a0) * xi_regularizer(p, s.a0);
  const double dxi = c / ((pp + w0) * (p + w0));
  const double ups = pp + p > 0 ? -c / (pp + p) * (1 / (pp + w0) + 1 / (p + w0)) : 0.0;
  return {dxi, ups};
}

namespace detail {

/// Angular factors of d alpha_j / s(Omega) multiplying (f3, f1, f2) for theta_j.
inline std::array<std::array<std::complex<double>, 3>, 4> angular_factors(double mu, double phi) {
  using cd = std::complex<double>;
  const cd mi(0, -1);
  const double st = std::sqrt(std::max(0.0, 1 - mu * mu));
  return {{{cd(1), cd{}, cd{}},
           {cd{}, cd{}, mi * st * std::cos(phi)},
           {cd{}, cd{}, mi * st * std::sin(phi)},
           {cd{}, mi, mi * mu}}};
}

/// Angular moments over the sphere with weight s^2 = 1 - (e_p . e_x)^2:
/// second[j][l][a][b] = int s^2 conj(c_ja) c_lb dOmega and first[j][a] = int s^2 c_ja dOmega.
/// The integrands are low-order polynomials, so a 12 x 24 product rule is exact.
struct AngularMoments {
  std::complex<double> second[4][4][3][3]{};
  std::complex<double> first[4][3]{};
};

inline const AngularMoments& angular_moments() {
  static const AngularMoments mom = [] {
    AngularMoments m;
    const auto sph = sphere_quadrature(1.0, 12, 24);
    for (const auto& px : sph.pixels) {
      const Vec3& n = px.position;
      const double s2 = 1 - n.x() * n.x();
      const auto c = angular_factors(n.z(), std::atan2(n.y(), n.x()));
      for (int j = 0; j < 4; ++j)
        for (int a = 0; a < 3; ++a) {
          m.first[j][a] += px.area * s2 * c[j][a];
          for (int l = 0; l < 4; ++l)
            for (int b = 0; b < 3; ++b) m.second[j][l][a][b] += px.area * s2 * std::conj(c[j][a]) * c[l][b];
        }
    }
    return m;
  }();
  return mom;
}

}  // namespace detail

/// Quantum Fisher information (vacuum term excluded) from a table of f values:
/// J_jl = 4 Re sum conj(d alpha_j) d alpha_l, plus the optional covariance corrections
/// -4 Re sum [conj(d alpha_j) dXi d alpha_l + conj(d alpha_j) Ups conj(d alpha_l)].
inline InfoMatrix assemble_qfi(const FTable& tab, const QuantumModel& m, bool with_corrections) {
  using cd = std::complex<double>;
  const auto& g = m.pgrid;
  const std::size_t n = g.size();
  const auto& mom = detail::angular_moments();
  const std::vector<cd>* F[3] = {&tab.f3, &tab.f1, &tab.f2};

  cd radial[3][3]{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      std::vector<cd> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = g.nodes[i] * g.nodes[i] * std::conj((*F[a])[i]) * (*F[b])[i];
      radial[a][b] = integrate<cd>(g, v);
    }
  InfoMatrix J;
  J.kind = InfoKind::quantum;
  const double pref = 4 / (8 * pi * pi * pi);
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      cd s{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += mom.second[j][l][a][b] * radial[a][b];
      J.entries(j, l) = pref * s.real();
    }

  if (with_corrections) {
    std::vector<std::vector<cd>> G(4, std::vector<cd>(n));
    for (int j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 3; ++a) G[j][i] += mom.first[j][a] * (*F[a])[i];
    const double pref2 = 4 / std::pow(8 * pi * pi * pi, 2);
    std::vector<double> wp2(n);
    for (std::size_t i = 0; i < n; ++i) wp2[i] = g.weights[i] * g.nodes[i] * g.nodes[i];
    for (int j = 0; j < 4; ++j)
      for (int l = j; l < 4; ++l) {
        cd sum{};
        for (std::size_t i = 0; i < n; ++i) {
          if (G[j][i] == cd{}) continue;
          cd row{};
          for (std::size_t k = 0; k < n; ++k) {
            const auto ker = covariance_kernels(g.nodes[i], g.nodes[k], m.scatterer);
            row += wp2[k] * (ker[0] * G[l][k] + ker[1] * std::conj(G[l][k]));
          }
          sum += wp2[i] * std::conj(G[j][i]) * row;
        }
        const double corr = -pref2 * sum.real();
        J.entries(j, l) += corr;
        if (l != j) J.entries(l, j) += corr;
      }
  }
  return J;
}

inline InfoMatrix qfi_matrix(double t, const QuantumModel& m, Gauge gauge, bool with_corrections = false) {
  if (with_corrections && gauge != Gauge::pzw)
    throw Error(ErrorKind::configuration, "covariance corrections are implemented for the PZW gauge only");
  return assemble_qfi(f_table(m, t, gauge), m, with_corrections);
}

/// Far-field closed form diag = (8 k^6 chi0^2 Phi / 15 pi) [5/(k chi0)^2, 1, 2, 7].
struct FarFieldQfi {
  InfoMatrix matrix;
  std::array<double, 4> normalized{};  ///< sqrt(N) / sqrt(J_jj), divided by chi0 or lambda
};

inline FarFieldQfi farfield_qfi(const Scatterer& s, const Pulse& pulse) {
  const double k = pulse.k_in;
  const double base = 8 * std::pow(k, 6) * s.chi0 * s.chi0 * pulse.phi / (15 * pi);
  FarFieldQfi out;
  out.matrix.kind = InfoKind::quantum;
  out.matrix.entries.diagonal() << base * 5 / (k * k * s.chi0 * s.chi0), base, 2 * base, 7 * base;
  const double nsc = n_scattered(s, pulse);
  for (int j = 0; j < 4; ++j)
    out.normalized[j] = std::sqrt(nsc / out.matrix.entries(j, j)) / (j == 0 ? s.chi0 : pulse.wavelength());
  return out;
}

namespace detail {

/// Adaptive Gauss-Kronrod on [a, b] for a complex integrand.
template <class F>
std::complex<double> gk(F&& f, double a, double b, double tol = 1e-11) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 31>::integrate([&](double x) { return f(x).real(); }, a, b, 10, tol);
  const double im = gauss_kronrod<double, 31>::integrate([&](double x) { return f(x).imag(); }, a, b, 10, tol);
  return {re, im};
}

/// Adaptive Gauss-Kronrod on [a, b] for a real integrand.
template <class F>
double gk_real(F&& f, double a, double b, double tol = 1e-11) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, tol);
}

}  // namespace detail

/// Radial scattered amplitude alpha_sc(p, t) = -sqrt(p) xi_p int dk/2pi sqrt(k) xi_k chi(k)
/// [alpha(k,t)/(k-p+i0) + alpha*(k,t)/(k+p)], evaluated directly from the transformation
/// coefficients with adaptive quadrature (independent of the tabulated f integrals).
inline std::complex<double> scattered_amplitude(double p, double t, const QuantumModel& m) {
  using cd = std::complex<double>;
  const Scatterer& s = m.scatterer;
  const double a = m.spectrum.band.lower(), b = m.spectrum.band.upper();
  const auto h = [&](double k) {
    return std::sqrt(k) * xi_regularizer(k, s.a0) * chi_response(k, s) * m.spectrum.amplitude(k) *
           std::exp(cd(0, -k * t));
  };
  const cd plus = detail::gk([&](double k) { return std::conj(h(k)) / (k + p); }, a, b);
  cd resonant;
  if (p > a && p < b) {
    const cd hp = h(p);
    const auto sub = [&](double k) { return k == p ? cd{} : (h(k) - hp) / (k - p); };
    resonant = detail::gk(sub, a, p) + detail::gk(sub, p, b) + hp * std::log((b - p) / (p - a)) - cd(0, pi) * hp;
  } else {
    resonant = detail::gk([&](double k) { return h(k) / (k - p); }, a, b);
  }
  return -std::sqrt(p) * xi_regularizer(p, s.a0) / (2 * pi) * (resonant + plus);
}

/// Scattered photon number N(t) = sum |alpha(t) - alpha_in e^{-ickt}|^2 = (1/3 pi^2) int p^2 |alpha_sc|^2 dp.
inline double nsc_transient(double t, const QuantumModel& m) {
  const auto& g = m.pgrid;
  std::vector<double> v(g.size());
  parallel_for(g.size(), [&](std::size_t i) {
    const double p = g.nodes[i];
    v[i] = p > 0 ? p * p * std::norm(scattered_amplitude(p, t, m)) : 0.0;
  });
  return integrate(g, v) / (3 * pi * pi);
}

namespace detail {

/// int_{-inf}^{inf} dp/(2 pi^2) g(p)/(p - k - i0) for g odd (parity = -1) or even (+1) in p.
template <class G>
std::complex<double> mode_integral(G&& g, double k, double rho, double a0, int parity) {
  const double gk0 = g(k);
  // [0, 2k]: pole subtracted symmetrically, so the logarithm vanishes.
  const auto near = [&](double q) {
    const double sub = q == k ? 0.0 : (g(q) - gk0) / (q - k);
    return sub - parity * g(q) / (q + k);
  };
  const auto far = [&](double q) { return g(q) * (1 / (q - k) - parity / (q + k)); };
  double total = gk_real(near, 0, 2 * k);
  const double half = pi / rho;
  const double q_cut = std::max(60 / a0, 40 * k);
  double lo = 2 * k;
  double hi = (std::floor(lo / half) + 1) * half;
  while (lo < q_cut) {
    total += gk_real(far, lo, hi);
    lo = hi;
    hi += half;
  }
  // Oscillatory tail: half-period pieces summed with repeated averaging of partial sums.
  constexpr int pieces = 48;
  std::vector<double> partial(pieces);
  double run = 0;
  for (int i = 0; i < pieces; ++i) {
    run += gk_real(far, lo, hi);
    partial[i] = run;
    lo = hi;
    hi += half;
  }
  for (int level = 0; level < pieces - 1; ++level)
    for (int i = 0; i + 1 < pieces - level; ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
  total += partial[0];
  return std::complex<double>(total, pi * gk0) / (2 * pi * pi);
}

}  // namespace detail

/// Scattered field of the regularized dipole from the quantum mode expansion, evaluated
/// numerically (the closed form lives in scattered_regularized).
inline ComplexField mode_integral_field(const Vec3& r, const Scatterer& s, const Pulse& pulse) {
  if (!(s.a0 > 0)) throw Error(ErrorKind::configuration, "mode integral needs a positive regularization size");
  const auto geo = nfi::detail::dipole_geometry(r, s, pulse.wavelength());
  const double rho = geo.rho;
  if (rho < s.a0) throw Error(ErrorKind::physics, "mode integral evaluated inside the regularization radius");
  const double k = pulse.k_in, a0 = s.a0;
  const auto j0 = [&](double x) { return x < 1e-4 ? 1 - x * x / 6 : std::sin(x) / x; };
  const auto hq = [&](double x) {
    return x < 1e-2 ? -1.0 / 3 + x * x / 30 : (x * std::cos(x) - std::sin(x)) / (x * x * x);
  };
  const auto j1 = [&](double x) { return x < 1e-2 ? x / 3 - x * x * x / 30 : (std::sin(x) - x * std::cos(x)) / (x * x); };
  const auto gt = [&](double q) { return q * q * q * xi_regularizer(q, a0) * j0(q * rho); };
  const auto gq = [&](double q) { return q * q * q * xi_regularizer(q, a0) * hq(q * rho); };
  const auto gb = [&](double q) { return q * q * q * xi_regularizer(q, a0) * j1(q * rho); };
  const auto it = detail::mode_integral(gt, k, rho, a0, -1);
  const auto iq = detail::mode_integral(gq, k, rho, a0, -1);
  const auto ib = detail::mode_integral(gb, k, rho, a0, +1);
  const std::complex<double> pre =
      s.chi0 * pulse.e_amplitude() * xi_regularizer(k, a0) * std::exp(std::complex<double>(0, k * s.r0.z()));
  return nfi::detail::assemble(geo, pre * it, pre * iq, I * pre * ib);
}

}  // namespace nfi
