#include <gtest/gtest.h>

#include <random>

#include "nfi/config.hpp"
#include "nfi/output.hpp"

using namespace nfi;

namespace {

constexpr int cases = 20;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  Vec3 vec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }

  Scatterer scatterer() {
    Scatterer s;
    s.chi0 = log_uniform(1e-7, 1e-4);
    s.omega0 = uniform(5, 20);
    return s;
  }

  Mat4 spd() {
    Mat4 a;
    for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = uniform(-1, 1);
    Mat4 m = a * a.transpose() + 0.1 * Mat4::Identity();
    const Eigen::Vector4d scale(log_uniform(1e-3, 1e3), 1, log_uniform(1e-2, 1e2), 1);
    return scale.asDiagonal() * m * scale.asDiagonal();
  }
};

}  // namespace

TEST(Property, FisherMatrixSymmetricAndPsd) {
  Gen g(11);
  for (int i = 0; i < 8; ++i) {
    const auto s = g.scatterer();
    Pulse p;
    p.phi = g.log_uniform(1e2, 1e8);
    const double z = g.log_uniform(0.3, 30) * (g.uniform(0, 1) < 0.5 ? -1 : 1);
    const auto grid = planar_grid(z, g.uniform(0.2, 1.9) * pi);
    const auto fi = fi_matrix(grid, s, p);
    EXPECT_LT(fi.symmetry_error(), 1e-12) << i;
    EXPECT_TRUE(fi.is_psd(1e-9)) << i << " " << fi.min_eigen_ratio();
  }
}

TEST(Property, FisherMatrixLinearInFluence) {
  Gen g(12);
  for (int i = 0; i < 6; ++i) {
    const auto s = g.scatterer();
    Pulse p;
    const auto grid = planar_grid(g.log_uniform(0.5, 10), g.uniform(0.5, 1.5) * pi);
    const auto a = fi_matrix(grid, s, p);
    const double f = g.log_uniform(0.1, 1e4);
    p.phi *= f;
    const auto b = fi_matrix(grid, s, p);
    EXPECT_LT((b.entries - f * a.entries).cwiseAbs().maxCoeff(), 1e-10 * b.entries.cwiseAbs().maxCoeff()) << i;
  }
}

TEST(Property, QfiStructure) {
  Gen g(13);
  for (int i = 0; i < 10; ++i) {
    Scatterer s;
    s.chi0 = 2.95e-6;
    s.omega0 = 10.3;
    s.a0 = g.uniform(0.05, 0.3);
    Pulse p;
    p.tau = g.uniform(30, 120);
    p.phi = g.log_uniform(1e3, 1e6);
    const auto m = QuantumModel::make(s, p);
    const double t = g.uniform(-1.5, 1.5) * p.tau;
    const auto j = qfi_matrix(t, m, g.uniform(0, 1) < 0.5 ? Gauge::pzw : Gauge::coulomb);
    EXPECT_LT(j.symmetry_error(), 1e-12) << i;
    EXPECT_TRUE(j.is_psd(1e-9)) << i << " " << j.min_eigen_ratio();
    EXPECT_NEAR(j(2, 2), 2 * j(1, 1), 1e-12 * j(2, 2)) << i;
    const double scale = j.entries.cwiseAbs().maxCoeff();
    EXPECT_LT(std::abs(j(0, 1)), 1e-10 * scale);
    EXPECT_LT(std::abs(j(0, 2)), 1e-10 * scale);
  }
}

TEST(Property, QfiLinearInFluence) {
  Gen g(14);
  for (int i = 0; i < 5; ++i) {
    Scatterer s;
    s.chi0 = 2.95e-6;
    s.omega0 = 10.3;
    s.a0 = g.uniform(0.05, 0.3);
    Pulse p;
    p.tau = g.uniform(30, 80);
    const double t = g.uniform(-1, 1) * p.tau;
    const auto a = qfi_matrix(t, QuantumModel::make(s, p), Gauge::pzw);
    const double f = g.log_uniform(0.1, 1e3);
    p.phi *= f;
    const auto b = qfi_matrix(t, QuantumModel::make(s, p), Gauge::pzw);
    EXPECT_LT((b.entries - f * a.entries).cwiseAbs().maxCoeff(), 1e-9 * b.entries.cwiseAbs().maxCoeff()) << i;
  }
}

TEST(Property, PrincipalValueOfCubics) {
  Gen g(15);
  const auto grid = uniform_grid(-1, 1, 4001);
  for (int i = 0; i < cases; ++i) {
    const std::array<double, 4> c{g.uniform(-2, 2), g.uniform(-2, 2), g.uniform(-2, 2), g.uniform(-2, 2)};
    const auto poly = [&](double k) { return c[0] + k * (c[1] + k * (c[2] + k * c[3])); };
    const double pole = g.uniform(-0.8, 0.8);
    std::vector<std::complex<double>> f;
    for (double k : grid.nodes) f.push_back(poly(k));
    // f(k) = f(p) + (k - p) q(k) with q(k) = c1 + c2 (k + p) + c3 (k^2 + k p + p^2)
    const double fp = poly(pole);
    const double q_int = 2 * c[1] + c[2] * 2 * pole + c[3] * (2.0 / 3 + 2 * pole * pole);
    const double exact = fp * std::log((1 - pole) / (1 + pole)) + q_int;
    const auto r = pv_integrate_sampled(grid, f, fp, pole);
    EXPECT_NEAR(r.principal.real(), exact, 1e-6) << i;
    EXPECT_NEAR(r.delta_term.imag(), -pi * fp, 1e-12) << i;
  }
}

TEST(Property, SquareHalfWidthInvertsSolidAngle) {
  Gen g(16);
  for (int i = 0; i < cases; ++i) {
    const double z = g.log_uniform(1e-2, 1e2);
    const double omega = g.uniform(1e-3, 1.99) * pi;
    const double a = square_half_width(omega, z);
    EXPECT_NEAR(square_solid_angle(a, z), omega, 1e-10 * omega) << i;
  }
}

TEST(Property, UnitRoundTrip) {
  Gen g(17);
  const std::array<QuantityKind, 6> kinds{QuantityKind::length,         QuantityKind::time,
                                          QuantityKind::frequency,      QuantityKind::polarizability,
                                          QuantityKind::fluence,        QuantityKind::field_amplitude};
  for (int i = 0; i < cases; ++i) {
    const auto u = UnitSystem::from_wavelength(g.log_uniform(1e-7, 1e-5));
    for (auto k : kinds) {
      const double v = g.log_uniform(1e-30, 1e30);
      EXPECT_NEAR(u.from_internal(u.to_internal(v, k), k), v, 1e-14 * v);
    }
  }
}

TEST(Property, CsvRoundTrip) {
  Gen g(18);
  for (int i = 0; i < cases; ++i) {
    SweepResult r;
    r.axis.name = "x";
    r.columns = {{"a", {}}, {"b", {}}};
    const int rows = 1 + int(g.uniform(0, 30));
    for (int k = 0; k < rows; ++k) {
      r.axis.values.push_back(g.log_uniform(1e-300, 1e300));
      r.columns[0].values.push_back(g.uniform(-1, 1) * g.log_uniform(1e-20, 1e20));
      r.columns[1].values.push_back(g.uniform(-1e6, 1e6));
    }
    const auto back = parse_csv(csv_text(r));
    EXPECT_EQ(back.axis.values, r.axis.values);
    EXPECT_EQ(back.columns[0].values, r.columns[0].values);
    EXPECT_EQ(back.columns[1].values, r.columns[1].values);
  }
}

TEST(Property, CrbMatchesDirectInverse) {
  Gen g(19);
  for (int i = 0; i < cases; ++i) {
    InfoMatrix fi;
    fi.entries = g.spd();
    const double n = g.log_uniform(1, 1e6), chi0 = g.log_uniform(1e-6, 1), lambda = g.uniform(1, 10);
    const auto r = crb_from_fi(fi, n, chi0, lambda);
    const Mat4 inv = fi.entries.inverse();
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(r.sigma[std::size_t(j)], std::sqrt(inv(j, j)), 1e-9 * std::sqrt(inv(j, j))) << i;
      const double unit = j == 0 ? chi0 : lambda;
      EXPECT_NEAR(r.normalized[std::size_t(j)], std::sqrt(n) * r.sigma[std::size_t(j)] / unit,
                  1e-12 * r.normalized[std::size_t(j)]);
    }
  }
}

TEST(Property, CrbBoundedByInverseDiagonal) {
  // the inverse diagonal never falls below 1 / F_jj
  Gen g(20);
  for (int i = 0; i < cases; ++i) {
    InfoMatrix fi;
    fi.entries = g.spd();
    const auto r = crb_from_fi(fi, 1, 1, 1);
    for (int j = 0; j < 4; ++j)
      EXPECT_GE(r.sigma[std::size_t(j)] * (1 + 1e-12), 1 / std::sqrt(fi(j, j))) << i;
  }
}

TEST(Property, GradientReflectionSymmetry) {
  Gen g(21);
  for (int i = 0; i < cases; ++i) {
    const auto s = g.scatterer();
    Pulse p;
    Vec3 r = g.vec(2);
    r.z() = g.uniform(0.2, 2) * (g.uniform(0, 1) < 0.5 ? -1 : 1);
    const double area = 1e-3;
    const auto a = intensity_gradient({r, Vec3::UnitZ(), area}, s, p, FieldModel::point, 1e-5);
    const auto b = intensity_gradient({Vec3(-r.x(), r.y(), r.z()), Vec3::UnitZ(), area}, s, p, FieldModel::point, 1e-5);
    const double scale = std::abs(a.d[1]) + 1e-3 * std::abs(a.d[0]) * s.chi0;
    EXPECT_NEAR(a.d[1], -b.d[1], 1e-6 * scale) << i;
    EXPECT_NEAR(a.d[0], b.d[0], 1e-8 * std::abs(a.d[0])) << i;
    EXPECT_NEAR(a.d[3], b.d[3], 1e-6 * (std::abs(a.d[3]) + scale)) << i;
  }
}

TEST(Property, CountsPositiveAndMonotoneInArea) {
  Gen g(22);
  for (int i = 0; i < cases; ++i) {
    const auto s = g.scatterer();
    Pulse p;
    p.phi = g.log_uniform(1, 1e6);
    Vec3 r = g.vec(3);
    r.z() = g.uniform(0.3, 3);
    const double area = g.log_uniform(1e-4, 1e-1);
    const double n1 = mean_counts({r, Vec3::UnitZ(), area}, s, p);
    const double n2 = mean_counts({r, Vec3::UnitZ(), 2 * area}, s, p);
    EXPECT_GT(n1, 0);
    EXPECT_NEAR(n2, 2 * n1, 1e-12 * n2);
  }
}
