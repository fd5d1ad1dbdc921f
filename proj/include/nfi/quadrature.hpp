#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nfi/model.hpp"

namespace nfi {

/// Nodes with trapezoidal weights on [nodes.front(), nodes.back()].
struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double lower() const { return nodes.front(); }
  double upper() const { return nodes.back(); }
};

inline std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

/// Sinh-mapped grid p_n = d sinh(delta (n - n0)) + k0, n = 0..n_max.
struct SinhGrid : Grid {
  double k0 = 1;
  double d = 2.5e-3;
  double delta = 3.8e-2;
  long n0 = 0;
  long n_max = 0;

  double node_at(long n) const { return d * std::sinh(delta * double(n - n0)) + k0; }
};

inline SinhGrid build_sinh_grid(double k0, double d, double delta, double k_max) {
  if (!(k0 > 0) || !(d > 0) || !(delta > 0) || !(k_max > k0))
    throw Error(ErrorKind::configuration, "sinh grid parameters out of range");
  SinhGrid g;
  g.k0 = k0;
  g.d = d;
  g.delta = delta;
  // Smallest offset with p_0 >= 0; then p_{-1} < 0.
  g.n0 = static_cast<long>(std::floor(std::asinh(k0 / d) / delta));
  while (g.node_at(0) < 0) --g.n0;
  while (g.node_at(-1) >= 0) ++g.n0;
  long n = 0;
  while (g.node_at(n) < k_max) ++n;
  g.n_max = n;
  g.nodes.resize(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) g.nodes[static_cast<std::size_t>(i)] = g.node_at(i);
  g.weights = trapezoid_weights(g.nodes);
  return g;
}

/// Grid with every interval split into `factor` equal parts.
inline Grid subdivide(const Grid& g, int factor) {
  Grid out;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    for (int j = 0; j < factor; ++j)
      out.nodes.push_back(g.nodes[i] + (g.nodes[i + 1] - g.nodes[i]) * j / factor);
  out.nodes.push_back(g.nodes.back());
  out.weights = trapezoid_weights(out.nodes);
  return out;
}

inline Grid uniform_grid(double a, double b, std::size_t n) {
  Grid g;
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i] = a + (b - a) * double(i) / double(n - 1);
  g.weights = trapezoid_weights(g.nodes);
  return g;
}

template <class T>
T integrate(const Grid& g, const std::vector<T>& values) {
  T s{};
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * values[i];
  return s;
}

/// Principal-value integral and the delta contribution of 1/(k - pole + i0).
struct PvResult {
  std::complex<double> principal;
  std::complex<double> delta_term;  ///< -i pi f(pole)
  std::complex<double> total() const { return principal + delta_term; }
};

/// PV integral of f(k)/(k - pole) from tabulated values on the grid.
///
/// `f_pole` is f evaluated at the pole. The pole may sit outside the grid, in which case
/// the delta term is zero and the logarithm uses absolute values.
inline PvResult pv_integrate_sampled(const Grid& g, const std::vector<std::complex<double>>& f,
                                     std::complex<double> f_pole, double pole) {
  using cd = std::complex<double>;
  const double a = g.lower(), b = g.upper();
  const std::size_t n = g.size();
  if (pole == a || pole == b) throw Error(ErrorKind::accuracy, "principal-value pole on the grid boundary");
  const bool inside = pole > a && pole < b;
  if (inside && std::abs(f_pole) > 0) {
    const double h_lo = g.nodes[1] - g.nodes[0];
    const double h_hi = g.nodes[n - 1] - g.nodes[n - 2];
    if (pole - a < h_lo || b - pole < h_hi) {
      double fmax = 0;
      for (const auto& v : f) fmax = std::max(fmax, std::abs(v));
      if (std::abs(f_pole) > 1e-10 * fmax)
        throw Error(ErrorKind::accuracy, "principal-value pole within one node of the grid boundary");
    }
  }
  cd regular{};
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = g.nodes[i] - pole;
    const double h = (i + 1 < n ? g.nodes[i + 1] : g.nodes[i]) - (i > 0 ? g.nodes[i - 1] : g.nodes[i]);
    cd v;
    if (std::abs(dx) > 1e-9 * h) {
      v = (f[i] - f_pole) / dx;
    } else {
      const std::size_t lo = i > 0 ? i - 1 : i, hi = i + 1 < n ? i + 1 : i;
      v = (f[hi] - f[lo]) / (g.nodes[hi] - g.nodes[lo]);
    }
    regular += g.weights[i] * v;
  }
  PvResult r;
  r.principal = regular + f_pole * std::log(std::abs((b - pole) / (pole - a)));
  r.delta_term = inside ? cd(0, -pi) * f_pole : cd{};
  return r;
}

/// PV integral of f(k)/(k - pole) with f a callable k -> complex.
template <class F>
PvResult pv_integrate(F&& f, double pole, const Grid& g) {
  std::vector<std::complex<double>> values(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) values[i] = f(g.nodes[i]);
  return pv_integrate_sampled(g, values, f(pole), pole);
}

/// Tensor-product quadrature of kernel(p', p) over grid x grid.
template <class K>
std::complex<double> double_integral(K&& kernel, const Grid& g) {
  std::complex<double> total{};
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::complex<double> row{};
    for (std::size_t j = 0; j < g.size(); ++j) row += g.weights[j] * std::complex<double>(kernel(g.nodes[i], g.nodes[j]));
    total += g.weights[i] * row;
  }
  return total;
}

/// Pairwise summation; order depends only on the input length.
template <class T>
T pairwise_sum(const T* x, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace nfi
