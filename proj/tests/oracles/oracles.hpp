#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library; each function rebuilds its answer from first principles.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

namespace codata {
inline constexpr double kB = 1.380649e-23;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double h = 6.62607015e-34;
inline constexpr double muB = 9.2740100783e-24;
inline constexpr double mu0 = 1.25663706212e-6;
}  // namespace codata

/// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double hstep = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * hstep) * (k % 2 ? 4.0 : 2.0);
  return s * hstep / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double hstep) {
  return (f(x + hstep) - f(x - hstep)) / (2.0 * hstep);
}

/// Series RLC coil (R, L, C tuned to f0 with unloaded quality factor Q) seen
/// through an ideal transformer that maps R to Z0/beta. The coil inductance is
/// scaled by (1 + eta*chi). Returns (Z0 - Zin)/(Z0 + Zin) at frequency nu.
inline std::complex<double> circuit_reflection(double nu, double f0, double q, double beta, double z0,
                                               std::complex<double> eta_chi = 0.0) {
  using namespace std::complex_literals;
  const double r = 1.0;
  const double w0 = 2.0 * std::numbers::pi * f0;
  const double l = q * r / w0;
  const double c = 1.0 / (w0 * w0 * l);
  const double w = 2.0 * std::numbers::pi * nu;
  const std::complex<double> zcoil = r + 1i * w * l * (1.0 + eta_chi) + 1.0 / (1i * w * c);
  const double turns2 = z0 / (beta * r);
  const std::complex<double> zin = turns2 * zcoil;
  return (z0 - zin) / (z0 + zin);
}

/// Principal-value transform (1/pi) PV int f(t)/(t - x) dt on a uniform grid,
/// using the alternating-point rule (only points an odd number of steps away
/// contribute). Returns values at every grid point.
inline std::vector<double> hilbert_pv(const std::vector<double>& grid, const std::vector<double>& f) {
  const std::size_t n = grid.size();
  const double hstep = grid[1] - grid[0];
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = (i % 2 == 0) ? 1 : 0; j < n; j += 2) s += f[j] / (grid[j] - grid[i]);
    out[i] = 2.0 * hstep / std::numbers::pi * s;
  }
  return out;
}

/// Uniform-kernel convolution (1/w) int_{-w/2}^{w/2} f(x - u) du by Simpson.
inline double box_convolve(const std::function<double(double)>& f, double x, double w, int n = 4000) {
  return simpson([&](double u) { return f(x - u); }, -0.5 * w, 0.5 * w, n) / w;
}

/// Location of the maximum of f on [a, b]: dense scan, then golden-section refinement.
inline double argmax(const std::function<double(double)>& f, double a, double b, int scan = 2000) {
  double best = a, fbest = f(a);
  for (int k = 1; k <= scan; ++k) {
    const double x = a + (b - a) * k / scan;
    const double fx = f(x);
    if (fx > fbest) {
      fbest = fx;
      best = x;
    }
  }
  double lo = best - (b - a) / scan, hi = best + (b - a) / scan;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (f(x1) > f(x2))
      hi = x2;
    else
      lo = x1;
  }
  return 0.5 * (lo + hi);
}

/// Spin sensitivity assembled one physical quantity at a time.
struct ChainedSensitivity {
  double gamma, m0, b_unit, xi, noise_rms, snr, n_min;
};

inline ChainedSensitivity chained_sensitivity(double b0, double temp, double r, double d, double density,
                                              double volume, double b1, double hwhm, double df,
                                              double g = 2.0023) {
  using namespace codata;
  ChainedSensitivity c{};
  c.gamma = g * muB / hbar;
  c.m0 = density * c.gamma * c.gamma * hbar * hbar * b0 / (4.0 * kB * temp);
  c.b_unit = mu0 / d;
  c.xi = c.gamma * b1 * c.m0 * (b0 / hwhm) * c.b_unit * volume;
  c.noise_rms = std::sqrt(4.0 * kB * temp * r * df);
  c.snr = c.xi / (3.0 * c.noise_rms);
  c.n_min = density * volume / (c.snr * std::sqrt(df));
  return c;
}

/// Pearson correlation coefficient.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
