#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nfi {

inline constexpr double pi = std::numbers::pi;

/// Error categories; the CLI maps each to a stable exit code.
enum class ErrorKind {
  configuration,  ///< malformed or out-of-range input
  geometry,       ///< impossible detector geometry
  physics,        ///< physically invalid regime (resonance in band, singular point)
  accuracy,       ///< quadrature cannot meet its accuracy contract
  degeneracy,     ///< singular or ill-conditioned information matrix
  resource        ///< I/O or size limits
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace si {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double eps0 = 8.8541878128e-12;
}  // namespace si

enum class QuantityKind { length, time, frequency, polarizability, fluence, field_amplitude };

/// Natural units with hbar = c = eps0 = 1 and the incident wavenumber set to 1.
struct UnitSystem {
  double k_in_si;      ///< incident wavenumber in 1/m
  double length_unit;  ///< meters per internal length
  double time_unit;    ///< seconds per internal time

  static UnitSystem from_wavelength(double lambda_m) {
    if (!(lambda_m > 0)) throw Error(ErrorKind::configuration, "wavelength must be positive");
    const double k = 2 * pi / lambda_m;
    return {k, 1 / k, 1 / (si::c * k)};
  }

  /// Multiplicative factor taking an SI value of the given kind to internal units.
  double scale(QuantityKind kind) const {
    const double L = length_unit;
    switch (kind) {
      case QuantityKind::length: return 1 / L;
      case QuantityKind::time: return 1 / time_unit;
      case QuantityKind::frequency: return time_unit;
      case QuantityKind::polarizability: return 1 / (L * L * L);
      case QuantityKind::fluence: return L * L;
      case QuantityKind::field_amplitude: {
        // eps0 E^2 is an energy density; the energy unit is hbar c / L.
        const double energy = si::hbar * si::c / L;
        return std::sqrt(si::eps0 * L * L * L / energy);
      }
    }
    throw Error(ErrorKind::configuration, "unknown quantity kind");
  }

  double to_internal(double value, QuantityKind kind) const { return value * scale(kind); }
  double from_internal(double value, QuantityKind kind) const { return value / scale(kind); }
};

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat4 = Eigen::Matrix4d;

/// Dipole scatterer in internal units.
struct Scatterer {
  double chi0 = 0;    ///< polarizability (length^3); SI polarizability is 2 eps0 chi0
  double a0 = 0;      ///< regularization size; 0 means point dipole
  Vec3 r0 = Vec3::Zero();
  double omega0 = 1e3;  ///< resonance angular frequency

  void validate() const {
    if (!(chi0 >= 0)) throw Error(ErrorKind::configuration, "chi0 must be non-negative");
    if (!(a0 >= 0)) throw Error(ErrorKind::configuration, "a0 must be non-negative");
    if (!(omega0 > 0)) throw Error(ErrorKind::configuration, "omega0 must be positive");
  }
};

/// d0^2 = hbar eps0 omega0 chi0 so that chi(0) = chi0.
inline double derived_d0_sq(const Scatterer& s) {
  if (!(s.omega0 > 0)) throw Error(ErrorKind::configuration, "omega0 must be positive");
  return s.omega0 * s.chi0;
}

/// Plane-wave pulse along +z polarized along x, internal units.
struct Pulse {
  double k_in = 1;
  double tau = 100;  ///< temporal width
  double phi = 1;    ///< photons per area

  /// Field amplitude from phi = c eps0 |E|^2 tau / (2 hbar omega).
  double e_amplitude() const { return std::sqrt(2 * phi * k_in / tau); }
  double wavelength() const { return 2 * pi / k_in; }
  bool narrow_band_warning() const { return tau * k_in < 10; }

  void validate() const {
    if (!(phi > 0)) throw Error(ErrorKind::configuration, "fluence must be positive");
    if (!(tau > 0)) throw Error(ErrorKind::configuration, "pulse width must be positive");
    if (!(k_in > 0)) throw Error(ErrorKind::configuration, "wavenumber must be positive");
  }
};

enum Param : int { chi0_param = 0, x0_param = 1, y0_param = 2, z0_param = 3 };
inline constexpr std::array<const char*, 4> param_names{"chi0", "x0", "y0", "z0"};

struct ParamVector {
  std::array<double, 4> theta{};
  static ParamVector of(const Scatterer& s) { return {{s.chi0, s.r0.x(), s.r0.y(), s.r0.z()}}; }
};

enum class InfoKind { classical, quantum };

/// 4x4 information matrix in the fixed (chi0, x0, y0, z0) order.
struct InfoMatrix {
  Mat4 entries = Mat4::Zero();
  InfoKind kind = InfoKind::classical;
  bool includes_vacuum_term = false;

  double operator()(int j, int l) const { return entries(j, l); }

  double symmetry_error() const {
    const double scale = entries.cwiseAbs().maxCoeff();
    if (scale == 0) return 0;
    return (entries - entries.transpose()).cwiseAbs().maxCoeff() / scale;
  }

  /// Smallest eigenvalue over the largest, after symmetrization.
  double min_eigen_ratio() const {
    const Mat4 sym = 0.5 * (entries + entries.transpose());
    Eigen::SelfAdjointEigenSolver<Mat4> es(sym, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    const double big = ev.cwiseAbs().maxCoeff();
    return big == 0 ? 0 : ev.minCoeff() / big;
  }

  bool is_psd(double tol = 1e-10) const { return min_eigen_ratio() >= -tol; }
};

}  // namespace nfi
