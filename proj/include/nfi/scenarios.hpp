#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "nfi/detector.hpp"
#include "nfi/fisher.hpp"
#include "nfi/qfi.hpp"

namespace nfi {

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Least-squares power law y = A x^exponent on log-log axes.
struct PowerFit {
  std::string name;
  double exponent = 0;
  double intercept = 0;
  double residual = 0;  ///< rms of the log residuals
  std::size_t points = 0;
  bool excluded_largest = false;
};

struct SweepResult {
  Column axis;
  std::vector<Column> columns;
  std::vector<PowerFit> fits;
  std::map<std::string, std::string> metadata;

  const Column& column(const std::string& name) const {
    for (const auto& c : columns)
      if (c.name == name) return c;
    throw Error(ErrorKind::configuration, "no column named " + name);
  }

  void check_shape() const {
    for (const auto& c : columns)
      if (c.values.size() != axis.values.size())
        throw Error(ErrorKind::configuration, "column " + c.name + " does not match the axis length");
  }
};

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw Error(ErrorKind::configuration, "invalid logarithmic range");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return v;
}

inline PowerFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y, std::size_t n) {
  if (n < 2 || n > x.size()) throw Error(ErrorKind::configuration, "power-law fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerFit f;
  f.points = n;
  f.exponent = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
  f.intercept = (sy - f.exponent * sx) / double(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(std::abs(y[i])) - f.intercept - f.exponent * std::log(x[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / double(n));
  return f;
}

/// Fit of |y| against x with x sorted so the last two entries belong to the largest sizes.
/// Those two points are dropped when that improves the residual more than twofold.
inline PowerFit fit_power_law(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
  PowerFit all = fit_log_log(x, y, x.size());
  all.name = name;
  if (x.size() >= 5) {
    PowerFit cut = fit_log_log(x, y, x.size() - 2);
    if (all.residual > 2 * cut.residual) {
      cut.name = name;
      cut.excluded_largest = true;
      return cut;
    }
  }
  return all;
}

/// Local log-log slope of y against x from a least-squares fit over [lo, hi].
inline double log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo * (1 - 1e-12) && x[i] <= hi * (1 + 1e-12)) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  return fit_log_log(xs, ys, xs.size()).exponent;
}

// ---------------------------------------------------------------------------------------------
// Classical CRB against detector distance

struct CrbSweepConfig {
  Scatterer scatterer;
  Pulse pulse;
  GeometryKind detector = GeometryKind::planar;
  double solid_angle = 1.97 * pi;
  int refinement = 1;
  double d_min = 0.02;  ///< in wavelengths
  double d_max = 10;
  int per_decade = 40;
  double finite_a0 = 0;  ///< size of the finite-size column; 0 drops it
};

inline PixelGrid detector_at(const CrbSweepConfig& c, double distance, Orientation o) {
  const double lam = c.pulse.wavelength();
  if (c.detector == GeometryKind::planar)
    return planar_grid(o == Orientation::forward ? distance : -distance, c.solid_angle, c.refinement, lam);
  if (c.detector == GeometryKind::hemisphere)
    return hemisphere_grid(distance, o, c.solid_angle, c.refinement, lam);
  throw Error(ErrorKind::configuration, "CRB sweeps support planar and hemisphere detectors");
}

/// Normalized CRBs for one detector placement.
inline CrbResult crb_at(const CrbSweepConfig& c, double distance, Orientation o, const Scatterer& s,
                        FieldModel model = FieldModel::point) {
  const auto grid = detector_at(c, distance, o);
  const auto fi = fi_matrix(grid, s, c.pulse, model);
  return crb_from_fi(fi, n_scattered(s, c.pulse), s.chi0, c.pulse.wavelength());
}

inline SweepResult crb_distance_sweep(const CrbSweepConfig& c) {
  const double lam = c.pulse.wavelength();
  if (!(c.d_min > 0) || c.d_max < c.d_min) throw Error(ErrorKind::configuration, "invalid distance range");
  const auto n = std::size_t(std::ceil(c.per_decade * std::log10(c.d_max / c.d_min))) + 1;
  const auto d = n < 2 ? std::vector<double>{c.d_min} : log_space(c.d_min, c.d_max, n);
  const bool planar = c.detector == GeometryKind::planar;

  SweepResult r;
  r.axis.name = planar ? "Z_over_lambda" : "R_over_lambda";
  r.axis.values = d;
  const char* tags[3] = {"fwd", "bwd", "finite"};
  const int cases = c.finite_a0 > 0 ? 3 : 2;
  for (int k = 0; k < cases; ++k) {
    for (const char* p : {"chi", "x", "y", "z"}) r.columns.push_back({std::string("crb_") + p + "_norm_" + tags[k], {}});
    r.columns.push_back({std::string("cond_") + tags[k], {}});
  }
  if (cases == 3) r.columns.push_back({"finite_extrapolated", {}});
  const auto ff = farfield_qfi(c.scatterer, c.pulse);
  for (const char* p : {"chi", "x", "y", "z"}) r.columns.push_back({std::string("qcrb_") + p + "_norm", {}});

  Scatterer finite = c.scatterer;
  finite.a0 = c.finite_a0;
  for (double di : d) {
    const double dist = di * lam;
    std::size_t col = 0;
    for (int k = 0; k < cases; ++k) {
      const auto o = k == 1 ? Orientation::backward : Orientation::forward;
      const auto res = k == 2 ? crb_at(c, dist, o, finite, FieldModel::regularized) : crb_at(c, dist, o, c.scatterer);
      for (int j = 0; j < 4; ++j) r.columns[col++].values.push_back(res.normalized[j]);
      r.columns[col++].values.push_back(res.condition_number);
    }
    if (cases == 3) r.columns[col++].values.push_back(dist < 3 * c.finite_a0 ? 1.0 : 0.0);
    for (int j = 0; j < 4; ++j) r.columns[col++].values.push_back(ff.normalized[j]);
  }
  r.metadata["detector"] = planar ? "planar" : "hemisphere";
  r.metadata["solid_angle_over_pi"] = std::to_string(c.solid_angle / pi);
  r.metadata["refinement"] = std::to_string(c.refinement);
  r.check_shape();
  return r;
}

// ---------------------------------------------------------------------------------------------
// QFI against time

struct QfiCase {
  std::string suffix;  ///< appended to column names; empty for the primary wavelength
  Scatterer scatterer;
  Pulse pulse;
  double time_unit_fs = 1;  ///< femtoseconds per internal time unit
};

struct QfiTimeConfig {
  std::vector<QfiCase> cases;
  QuadratureSettings quad;
  std::vector<Gauge> gauges{Gauge::pzw, Gauge::coulomb};
  bool corrections = false;
  double t_min_over_tau = -3;
  double t_max_over_tau = 5;
  int samples_per_period = 8;
  bool normalize = true;
};

inline constexpr std::array<std::array<int, 2>, 5> qfi_entries{{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 3}}};

inline std::string entry_name(int j, int l) { return "J" + std::to_string(j) + std::to_string(l); }

/// Dominant angular frequency of a uniformly sampled series (mean removed), by a direct DFT scan.
inline double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y, double w_max) {
  const std::size_t n = t.size();
  double mean = 0;
  for (double v : y) mean += v / double(n);
  const double span = t.back() - t.front();
  const double dw = 2 * pi / span / 8;
  double best = 0, best_w = 0;
  for (double w = dw; w <= w_max; w += dw) {
    std::complex<double> s{};
    for (std::size_t i = 0; i < n; ++i) s += (y[i] - mean) * std::exp(std::complex<double>(0, -w * t[i]));
    if (std::abs(s) > best) {
      best = std::abs(s);
      best_w = w;
    }
  }
  return best_w;
}

inline SweepResult qfi_time_sweep(const QfiTimeConfig& c) {
  if (c.cases.empty()) throw Error(ErrorKind::configuration, "time sweep needs at least one wavelength");
  if (c.samples_per_period < 2) throw Error(ErrorKind::configuration, "need at least two samples per period");
  const QfiCase& ref = c.cases.front();
  const double fs = ref.time_unit_fs;
  double period_fs = 1e300;
  for (const auto& q : c.cases) period_fs = std::min(period_fs, 2 * pi / q.pulse.k_in * q.time_unit_fs);
  const double t0 = c.t_min_over_tau * ref.pulse.tau * fs, t1 = c.t_max_over_tau * ref.pulse.tau * fs;
  const auto n = std::size_t(std::ceil((t1 - t0) / period_fs * c.samples_per_period)) + 1;

  SweepResult r;
  r.axis.name = "t_fs";
  for (std::size_t i = 0; i < n; ++i) r.axis.values.push_back(t0 + (t1 - t0) * double(i) / double(n - 1));
  r.columns.push_back({"t_over_tau", {}});
  for (double t : r.axis.values) r.columns.back().values.push_back(t / (ref.pulse.tau * fs));

  for (const auto& q : c.cases) {
    const auto model = QuantumModel::make(q.scatterer, q.pulse, c.quad);
    const auto ff = farfield_qfi(q.scatterer, q.pulse);
    for (Gauge g : c.gauges) {
      const std::string tag = std::string("_") + gauge_name(g) + q.suffix;
      std::vector<InfoMatrix> series(n);
      for (std::size_t i = 0; i < n; ++i)
        series[i] = qfi_matrix(r.axis.values[i] / q.time_unit_fs, model, g, c.corrections && g == Gauge::pzw);
      const InfoMatrix& last = series.back();
      for (const auto& e : qfi_entries) {
        Column raw{entry_name(e[0], e[1]) + tag, {}};
        Column norm{entry_name(e[0], e[1]) + tag + "_norm", {}};
        const double scale = e[0] == e[1] ? last(e[0], e[0]) : std::sqrt(last(0, 0) * last(3, 3));
        for (const auto& J : series) {
          raw.values.push_back(J(e[0], e[1]));
          norm.values.push_back(J(e[0], e[1]) / scale);
        }
        r.columns.push_back(std::move(raw));
        if (c.normalize) r.columns.push_back(std::move(norm));
      }
      // Peak ratios and the oscillation frequency of J11 within half a pulse width of t = 0.
      double peak11 = 0, peak00 = 0;
      std::vector<double> tw, yw;
      for (std::size_t i = 0; i < n; ++i) {
        peak11 = std::max(peak11, series[i](1, 1));
        peak00 = std::max(peak00, series[i](0, 0));
        const double t = r.axis.values[i] / q.time_unit_fs;
        if (std::abs(t) <= 0.5 * q.pulse.tau) {
          tw.push_back(t);
          yw.push_back(series[i](1, 1));
        }
      }
      r.metadata["peak_J11_over_final" + tag] = std::to_string(peak11 / last(1, 1));
      r.metadata["peak_J00_over_final" + tag] = std::to_string(peak00 / last(0, 0));
      r.metadata["peak_J11_over_closed_form" + tag] = std::to_string(peak11 / ff.matrix(1, 1));
      if (tw.size() > 8)
        r.metadata["J11_oscillation_over_omega" + tag] =
            std::to_string(dominant_frequency(tw, yw, 4 * q.pulse.k_in) / q.pulse.k_in);
    }
  }
  r.metadata["normalization"] = "value at the last time sample";
  r.check_shape();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Peak QFI against scatterer size

struct SizeScanConfig {
  Scatterer scatterer;  ///< a0 is overwritten per point
  Pulse pulse;
  QuadratureSettings quad;
  std::vector<Gauge> gauges{Gauge::pzw, Gauge::coulomb};
  double lambda_over_a0_min = 20;
  double lambda_over_a0_max = 120;
  int sizes = 8;
  int cycle_samples = 16;  ///< samples across the optical cycle centred on t = 0
};

/// Largest |J_jl(t)| over one optical cycle centred on t = 0, for the five independent entries.
inline std::array<double, 5> peak_qfi(const QuantumModel& m, Gauge g, int cycle_samples) {
  std::array<double, 5> best{};
  const double period = 2 * pi / m.pulse.k_in;
  for (int i = 0; i <= cycle_samples; ++i) {
    const double t = -0.5 * period + period * i / cycle_samples;
    const auto J = qfi_matrix(t, m, g);
    for (std::size_t e = 0; e < 5; ++e) best[e] = std::max(best[e], std::abs(J(qfi_entries[e][0], qfi_entries[e][1])));
  }
  return best;
}

inline SweepResult size_scaling_sweep(const SizeScanConfig& c) {
  const double lam = c.pulse.wavelength();
  // Descending lambda/a0, so the largest sizes come last for the exclusion rule.
  auto ratio = log_space(c.lambda_over_a0_min, c.lambda_over_a0_max, std::size_t(c.sizes));
  std::reverse(ratio.begin(), ratio.end());
  for (double x : ratio)
    if (x < 10 - 1e-9 || x > 200 + 1e-9) throw Error(ErrorKind::configuration, "a0 must lie within [lambda/200, lambda/10]");

  SweepResult r;
  r.axis.name = "lambda_over_a0";
  r.axis.values = ratio;
  for (Gauge g : c.gauges)
    for (const auto& e : qfi_entries) r.columns.push_back({entry_name(e[0], e[1]) + "_" + gauge_name(g) + "_peak", {}});

  for (double x : ratio) {
    Scatterer s = c.scatterer;
    s.a0 = lam / x;
    const auto m = QuantumModel::make(s, c.pulse, c.quad);
    std::size_t col = 0;
    for (Gauge g : c.gauges) {
      const auto peak = peak_qfi(m, g, c.cycle_samples);
      for (double v : peak) r.columns[col++].values.push_back(v);
    }
  }
  for (const auto& col : r.columns) r.fits.push_back(fit_power_law(col.name, ratio, col.values));
  r.metadata["peak_definition"] = "max |J| over one optical cycle centred on t = 0";
  r.check_shape();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Oracles

struct CheckResult {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

inline CheckResult check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

/// |PV int_0^3 dk/(k-1) - ln 2| on a sinh grid.
inline double oracle_pv_log() {
  const auto g = build_sinh_grid(1.0, 2.5e-3, 3.8e-2, 3.0);
  Grid trimmed = g;
  trimmed.nodes.back() = 3.0;
  trimmed.nodes.front() = 0.0;
  trimmed.weights = trapezoid_weights(trimmed.nodes);
  const auto r = pv_integrate([](double) { return std::complex<double>(1, 0); }, 1.0, trimmed);
  return std::abs(r.principal - std::log(2.0));
}

/// Relative deviation of lim_{eta->0} int f/(k-p+i eta) from PV - i pi f(p), with f a shifted
/// Gaussian; the limit is taken by linear extrapolation from eta = 1e-4 and 1e-5.
inline double oracle_sokhotski_plemelj() {
  const double p = 1.3, a = 0.0, b = 3.0;
  const auto f = [](double k) { return std::exp(-(k - 1) * (k - 1) * 4) * (1 + 0.3 * k); };
  const auto brute = [&](double eta) {
    using boost::math::quadrature::gauss_kronrod;
    const auto re = [&](double k) { return f(k) * (k - p) / ((k - p) * (k - p) + eta * eta); };
    const auto im = [&](double k) { return -f(k) * eta / ((k - p) * (k - p) + eta * eta); };
    std::vector<double> cuts{a};
    for (double s : {-1e3, -1e2, -1e1, -1.0, 0.0, 1.0, 1e1, 1e2, 1e3}) cuts.push_back(p + s * eta);
    cuts.push_back(b);
    std::complex<double> sum{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      sum += std::complex<double>(gauss_kronrod<double, 61>::integrate(re, cuts[i], cuts[i + 1], 15, 1e-13),
                                  gauss_kronrod<double, 61>::integrate(im, cuts[i], cuts[i + 1], 15, 1e-13));
    }
    return sum;
  };
  const auto i4 = brute(1e-4), i5 = brute(1e-5);
  const auto limit = i5 + (i5 - i4) * (1e-5 / (1e-4 - 1e-5));
  const Grid g = uniform_grid(a, b, 30001);
  const auto pv = pv_integrate([&](double k) { return std::complex<double>(f(k), 0); }, p, g);
  return std::abs(limit - pv.total()) / std::abs(pv.total());
}

/// Gradient-form FI of a 3x3 pixel patch against the explicit Poisson-likelihood sum to n = 200.
inline double oracle_poisson_fi() {
  Scatterer s;
  s.chi0 = 0.05;
  Pulse pulse;
  pulse.tau = 100;
  const double z = 0.6;
  std::vector<Pixel> px;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) px.push_back({Vec3(0.4 * i + 0.05, 0.4 * j - 0.03, z), Vec3::UnitZ(), 0.16});
  const double h = 1e-4;
  // Pick the fluence so the mean counts are around ten.
  pulse.phi = 1;
  const double n1 = mean_counts(px[4], s, pulse);
  pulse.phi = 10 / n1;
  Mat4 formula = Mat4::Zero(), brute = Mat4::Zero();
  const double scale = pulse.tau / pulse.k_in;
  for (const auto& p : px) {
    const auto g = intensity_gradient(p, s, pulse, FieldModel::point, h);
    const double nbar = scale * p.area * g.intensity;
    std::array<double, 4> dn{};
    for (int j = 0; j < 4; ++j) dn[j] = scale * p.area * g.d[j];
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) formula(j, l) += dn[j] * dn[l] / nbar;
    for (int n = 0; n <= 200; ++n) {
      const double logp = -nbar + n * std::log(nbar) - std::lgamma(n + 1.0);
      const double prob = std::exp(logp);
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) brute(j, l) += prob * (n / nbar - 1) * dn[j] * (n / nbar - 1) * dn[l];
    }
  }
  double worst = 0;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      const double ref = std::sqrt(formula(j, j) * formula(l, l));
      worst = std::max(worst, std::abs(formula(j, l) - brute(j, l)) / ref);
    }
  return worst;
}

/// Relative difference between the analytic chi0 derivative of the pixel intensity and a
/// central difference, worst over a few near- and far-field pixels.
inline double oracle_chi_gradient() {
  Scatterer s;
  s.chi0 = 2.951e-6;
  Pulse pulse;
  double worst = 0;
  for (const Vec3& r : {Vec3(0.1, 0.05, 0.3), Vec3(-0.4, 0.2, -0.2), Vec3(3, -1, 20), Vec3(0.0, 0.7, 1.1)}) {
    const Pixel px{r, Vec3::UnitZ(), 1e-3};
    const auto g = intensity_gradient(px, s, pulse, FieldModel::point, 1e-5);
    const double h = 1e-3 * s.chi0;
    Scatterer sp = s, sm = s;
    sp.chi0 += h;
    sm.chi0 -= h;
    const auto in = incident_field(r, 0, pulse);
    const double ip = px.normal.dot(poynting_terms(in, scattered_point(r, sp, pulse)).scatterer_dependent());
    const double im = px.normal.dot(poynting_terms(in, scattered_point(r, sm, pulse)).scatterer_dependent());
    worst = std::max(worst, std::abs((ip - im) / (2 * h) - g.d[0]) / std::abs(g.d[0]));
  }
  return worst;
}

/// Scattered power through a sphere of radius R over sigma_tot I_in.
inline double scattered_power_ratio(double radius, const Scatterer& s, const Pulse& pulse, int n_mu = 64, int n_phi = 128) {
  const auto sph = sphere_quadrature(radius, n_mu, n_phi);
  std::vector<double> flux(sph.size());
  for (std::size_t i = 0; i < sph.size(); ++i) {
    const auto& px = sph.pixels[i];
    const auto sc = scattered_point(px.position, s, pulse);
    flux[i] = px.area * px.normal.dot(poynting_avg(sc));
  }
  const double intensity = 0.5 * pulse.e_amplitude() * pulse.e_amplitude();
  return pairwise_sum(flux.data(), flux.size()) / (sigma_total(s, pulse) * intensity);
}

/// Worst relative difference between the mode-integral field and the closed form.
inline double oracle_mode_field(double a0) {
  Scatterer s;
  s.chi0 = 1e-3;
  s.a0 = a0;
  Pulse pulse;
  const Vec3 dir = Vec3(0.3, 0.4, 0.866).normalized();
  double worst = 0;
  for (double rho : {5 * a0, pulse.wavelength() / 10, pulse.wavelength()}) {
    const auto mi = mode_integral_field(rho * dir, s, pulse);
    const auto cf = scattered_regularized(rho * dir, s, pulse);
    worst = std::max(worst, ((mi.e - cf.e).norm() + (mi.b - cf.b).norm()) / (cf.e.norm() + cf.b.norm()));
  }
  return worst;
}

/// f2(1.2 k_in, t = 0) from the sinh-grid machinery against a uniform symmetric-excision
/// midpoint rule with about 1e5 nodes.
inline double oracle_dense_f2() {
  Scatterer s;
  s.chi0 = 2.951e-6;
  s.a0 = 0.2135;
  s.omega0 = 10.3;
  Pulse pulse;
  pulse.tau = 43.9;
  const auto m = QuantumModel::make(s, pulse);
  const double p = 1.2;
  const auto f = f_functions(p, 0, m, Gauge::pzw);
  const double a = m.spectrum.band.lower(), b = m.spectrum.band.upper();
  const auto h = [&](double k) {
    return std::sqrt(k) * xi_regularizer(k, s.a0) * chi_response(k, s) * m.spectrum.amplitude(k);
  };
  const double step = (b - a) / 1e5;
  std::complex<double> pv{}, plus{};
  for (double x = 0.5 * step; p + x < b || p - x > a; x += step) {
    for (double k : {p + x, p - x}) {
      if (k <= a || k >= b) continue;
      pv += step * h(k) / (k - p);
      plus += step * std::conj(h(k)) / (k + p);
    }
  }
  const std::complex<double> ref =
      std::pow(p, 1.5) * xi_regularizer(p, s.a0) / (2 * pi) * (plus + pv - std::complex<double>(0, pi) * h(p));
  return std::abs(f[1] - ref) / std::abs(ref);
}

/// Largest deviation of the far-field normalized QCRBs from their closed-form constants.
inline double oracle_farfield_constants() {
  Scatterer s;
  s.chi0 = 2.951e-6;
  const auto ff = farfield_qfi(s, Pulse{});
  const std::array<double, 4> expect{0.5, std::sqrt(5.0) / (4 * pi), std::sqrt(2.5) / (4 * pi),
                                     std::sqrt(5.0 / 7.0) / (4 * pi)};
  double worst = 0;
  for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(ff.normalized[j] - expect[j]));
  return worst;
}

enum class ValidationLevel { quick, full };

inline std::vector<CheckResult> validate_suite(ValidationLevel level) {
  std::vector<CheckResult> out;
  out.push_back(check("pv_log_case", oracle_pv_log(), 1e-8));
  out.push_back(check("sokhotski_plemelj_limit", oracle_sokhotski_plemelj(), 1e-4));
  out.push_back(check("poisson_likelihood_fi", oracle_poisson_fi(), 1e-8));
  out.push_back(check("chi0_gradient_fd", oracle_chi_gradient(), 1e-6));
  {
    Scatterer s;
    s.chi0 = 2.951e-6;
    out.push_back(check("energy_conservation", std::abs(scattered_power_ratio(100 * 2 * pi, s, Pulse{}) - 1), 5e-3));
  }
  out.push_back(check("mode_integral_field", oracle_mode_field(2 * pi / 30), 1e-3));
  out.push_back(check("farfield_constants", oracle_farfield_constants(), 1e-12));
  if (level == ValidationLevel::full) {
    out.push_back(check("dense_grid_f2", oracle_dense_f2(), 1e-4));
    out.push_back(check("mode_integral_field_small", oracle_mode_field(2 * pi / 120), 1e-3));
  }
  return out;
}

}  // namespace nfi
