#include <gtest/gtest.h>

#include "nfi/config.hpp"
#include "nfi/scenarios.hpp"

using namespace nfi;

namespace {

PhysicalSetup fig3_setup(double tau_fs = 24, double phi_scale = 1) {
  auto c = load_config("", {}, "fig3");
  c.pulse.tau_fs = tau_fs;
  const auto base = physical_setup(c, c.pulse.lambda_nm);
  const double phi = base.units.from_internal(base.pulse.phi, QuantityKind::fluence);
  return physical_setup(c, c.pulse.lambda_nm, phi * phi_scale);
}

}  // namespace

TEST(Fits, RecoversExactPowerLaw) {
  const auto x = log_space(20, 120, 8);
  std::vector<double> y;
  for (double v : x) y.push_back(3.5 * std::pow(v, 4));
  const auto f = fit_power_law("J", x, y);
  EXPECT_NEAR(f.exponent, 4, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.5, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_FALSE(f.excluded_largest);
  EXPECT_EQ(f.points, 8u);
}

TEST(Fits, DropsTwoLargestSizesWhenTheyDepart) {
  // descending x = lambda / a0, so the last two points are the largest scatterers
  auto x = log_space(20, 120, 8);
  std::reverse(x.begin(), x.end());
  std::vector<double> y;
  for (double v : x) y.push_back(std::pow(v, 2));
  y[6] *= 1.5;
  y[7] *= 2.5;
  const auto f = fit_power_law("J", x, y);
  EXPECT_TRUE(f.excluded_largest);
  EXPECT_EQ(f.points, 6u);
  EXPECT_NEAR(f.exponent, 2, 1e-12);
}

TEST(Fits, LocalSlope) {
  const auto x = log_space(0.01, 1, 50);
  std::vector<double> y;
  for (double v : x) y.push_back(v * v * v * (1 + 1e-3 * v));
  EXPECT_NEAR(log_slope(x, y, 0.02, 0.08), 3, 1e-3);
}

TEST(Fits, LogSpaceEndpoints) {
  const auto v = log_space(0.02, 10, 5);
  EXPECT_DOUBLE_EQ(v.front(), 0.02);
  EXPECT_NEAR(v.back(), 10, 1e-12);
  EXPECT_THROW(log_space(1, 1, 3), Error);
}

TEST(Frequency, DominantFrequencyOfSinusoid) {
  std::vector<double> t, y;
  for (int i = 0; i < 400; ++i) {
    t.push_back(0.05 * i);
    y.push_back(3 + std::cos(2.0 * t.back() + 0.4));
  }
  EXPECT_NEAR(dominant_frequency(t, y, 6), 2.0, 0.05);
}

TEST(Oracles, QuickSuitePasses) {
  for (const auto& c : validate_suite(ValidationLevel::quick)) EXPECT_TRUE(c.passed) << c.name << " " << c.value;
}

TEST(Oracles, IndividualTolerances) {
  EXPECT_LT(oracle_pv_log(), 1e-8);
  EXPECT_LT(oracle_sokhotski_plemelj(), 1e-4);
  EXPECT_LT(oracle_poisson_fi(), 1e-8);
  EXPECT_LT(oracle_chi_gradient(), 1e-6);
  EXPECT_LT(oracle_dense_f2(), 1e-4);
  Scatterer s;
  s.chi0 = 2.951e-6;
  EXPECT_LT(std::abs(scattered_power_ratio(100 * 2 * pi, s, Pulse{}) - 1), 5e-3);
}

TEST(CrbSweep, ColumnsAndFarFieldPlateau) {
  auto c = crb_sweep_config(load_config("", {}, "fig2"));
  c.d_min = 2;
  c.d_max = 10;
  c.per_decade = 6;
  const auto r = crb_distance_sweep(c);
  EXPECT_EQ(r.axis.name, "Z_over_lambda");
  for (const char* name : {"crb_chi_norm_fwd", "crb_x_norm_fwd", "crb_y_norm_fwd", "crb_z_norm_fwd", "crb_x_norm_bwd",
                           "crb_x_norm_finite", "qcrb_x_norm", "cond_fwd", "finite_extrapolated"})
    EXPECT_NO_THROW(r.column(name)) << name;
  const char* params[4] = {"chi", "x", "y", "z"};
  for (const char* side : {"fwd", "bwd"}) {
    for (int j = 0; j < 4; ++j) {
      const auto& col = r.column(std::string("crb_") + params[j] + "_norm_" + side).values;
      const auto& q = r.column(std::string("qcrb_") + params[j] + "_norm").values;
      for (std::size_t i = 0; i < col.size(); ++i) {
        EXPECT_NEAR(col[i] / col.back(), 1.0, 0.1) << side << params[j] << i;
        EXPECT_GT(col[i], q[i]);
      }
    }
  }
}

TEST(CrbSweep, FiniteSizeDepartsCloseToScatterer) {
  auto c = crb_sweep_config(load_config("", {}, "fig2"));
  c.d_min = 0.02;
  c.d_max = 0.2;
  c.per_decade = 3;
  const auto r = crb_distance_sweep(c);
  const auto& pt = r.column("crb_x_norm_fwd").values;
  const auto& fin = r.column("crb_x_norm_finite").values;
  const auto& flag = r.column("finite_extrapolated").values;
  EXPECT_EQ(flag.front(), 1.0);
  EXPECT_EQ(flag.back(), 0.0);
  EXPECT_GT(std::abs(fin.front() / pt.front() - 1), 0.1);
  EXPECT_LT(std::abs(fin.back() / pt.back() - 1), 0.1);
}

TEST(CrbSweep, SingleDistance) {
  auto cfg = load_config("", {"detector.distance_um=10.3"}, "fig2");
  const auto c = crb_sweep_config(cfg);
  EXPECT_NEAR(c.d_min, 10, 1e-12);
  const auto r = crb_distance_sweep(c);
  EXPECT_EQ(r.axis.values.size(), 1u);
}

TEST(QfiTime, PeakNearZeroAndOscillatesAtTwiceOmega) {
  auto cfg = load_config("", {"run.t_min_over_tau=-1", "run.t_max_over_tau=1", "run.samples_per_period=12",
                              "run.gauges=[\"pzw\"]", "run.lambda2_nm=0"},
                         "fig3");
  const auto r = qfi_time_sweep(qfi_time_config(cfg));
  const auto& t = r.column("t_over_tau").values;
  const auto& j = r.column("J11_pzw").values;
  const auto peak = std::max_element(j.begin(), j.end()) - j.begin();
  EXPECT_LT(std::abs(t[std::size_t(peak)]), 0.5);
  const double w = std::stod(r.metadata.at("J11_oscillation_over_omega_pzw"));
  EXPECT_NEAR(w, 2.0, 0.2);
}

TEST(QfiTime, NormalizedColumnsSettleInLongPulseRegime) {
  auto cfg = load_config("", {"scatterer.a0_nm=0", "scatterer.resonance_nm=1", "pulse.tau_fs=150", "run.t_min_over_tau=4",
                              "run.t_max_over_tau=6", "run.samples_per_period=2", "run.lambda2_nm=0"},
                         "fig2");
  const auto r = qfi_time_sweep(qfi_time_config(cfg));
  for (const char* name : {"J00_pzw_norm", "J11_pzw_norm", "J33_pzw_norm", "J11_coulomb_norm"})
    for (double v : r.column(name).values) EXPECT_NEAR(v, 1.0, 0.03) << name;
}

TEST(QfiTime, TwoWavelengthPeaksAreComparable) {
  const auto cfg = load_config("", {}, "fig3");
  const auto k = qfi_time_config(cfg);
  ASSERT_EQ(k.cases.size(), 2u);
  std::array<double, 2> peak{};
  for (int i = 0; i < 2; ++i) {
    const auto& q = k.cases[std::size_t(i)];
    const auto m = QuantumModel::make(q.scatterer, q.pulse, k.quad);
    const double k_si = 2 * pi / (i == 0 ? 1030e-9 : 4500e-9);
    peak[std::size_t(i)] = peak_qfi(m, Gauge::pzw, 16)[1] * k_si * k_si;
  }
  EXPECT_LT(std::max(peak[0] / peak[1], peak[1] / peak[0]), 1.5);
}

TEST(QfiTime, PeakScalesWithFluxNotWidth) {
  // fixed Phi / tau across tau = 24, 48, 96 fs
  std::array<double, 3> peak{};
  const std::array<double, 3> widths{24, 48, 96};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto ps = fig3_setup(widths[i], widths[i] / 24);
    peak[i] = peak_qfi(QuantumModel::make(ps.scatterer, ps.pulse), Gauge::pzw, 16)[1];
  }
  for (std::size_t i = 1; i < 3; ++i) EXPECT_NEAR(peak[i] / peak[0], 1.0, 0.05) << widths[i];
}

TEST(QfiTime, NearFieldPartOfPeakScalesWithFlux) {
  // the peak also carries the information already radiated by t = 0, half the far-field value,
  // which grows with Phi rather than Phi / tau
  std::array<double, 3> excess{};
  const std::array<double, 3> widths{24, 48, 96};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto ps = fig3_setup(widths[i], widths[i] / 24);
    const auto m = QuantumModel::make(ps.scatterer, ps.pulse);
    const double far = qfi_matrix(5 * ps.pulse.tau, m, Gauge::pzw)(1, 1);
    excess[i] = peak_qfi(m, Gauge::pzw, 16)[1] - 0.5 * far;
  }
  for (std::size_t i = 1; i < 3; ++i) EXPECT_NEAR(excess[i] / excess[0], 1.0, 0.01) << widths[i];
}

TEST(SizeScan, PeakGrowsAsScattererShrinks) {
  auto cfg = load_config("", {"run.sizes=3", "run.lambda_over_a0_min=30", "run.lambda_over_a0_max=60"}, "fig3");
  auto k = size_scan_config(cfg);
  k.cycle_samples = 4;
  const auto r = size_scaling_sweep(k);
  EXPECT_EQ(r.axis.name, "lambda_over_a0");
  EXPECT_EQ(r.fits.size(), 10u);
  const auto& j = r.column("J11_pzw_peak").values;
  EXPECT_GT(j[0], j[1]);
  EXPECT_GT(j[1], j[2]);
  EXPECT_GT(r.fits[1].exponent, 3);
}
