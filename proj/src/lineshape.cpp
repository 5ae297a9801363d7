#include "esrtwin/lineshape.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_sf_dawson.h>

#include "esrtwin/errors.hpp"

namespace esrtwin {

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;

// below this kernel-to-linewidth ratio the closed forms lose precision and the
// unbroadened line is returned instead
constexpr double min_relative_spread = 1e-7;

double dawson(double u) { return gsl_sf_dawson(u); }

}  // namespace

void LineshapeParams::validate() const {
  if (!(hwhm > 0.0)) throw DomainError("linewidth (HWHM) must be > 0");
  if (!(amplitude >= 0.0)) throw DomainError("line amplitude must be >= 0");
}

double FieldInhomogeneity::spread() const {
  if (sample_extent < 0.0) throw DomainError("sample extent must be >= 0");
  return std::abs(gradient) * sample_extent;
}

double peak_susceptibility(double static_magnetization, double hwhm, const PhysicalConstants& c) {
  if (!(hwhm > 0.0)) throw DomainError("linewidth (HWHM) must be > 0");
  return c.vacuum_permeability * static_magnetization / (2.0 * hwhm);
}

double chi_absorption(double field, const LineshapeParams& p) {
  const double x = (field - p.center_field) / p.hwhm;
  if (p.shape == LineShape::gaussian) return p.amplitude * std::exp(-ln2 * x * x);
  return p.amplitude / (1.0 + x * x);
}

double chi_dispersion(double field, const LineshapeParams& p) {
  const double x = (field - p.center_field) / p.hwhm;
  if (p.shape == LineShape::gaussian) return -p.amplitude * two_over_sqrt_pi * dawson(std::sqrt(ln2) * x);
  return -p.amplitude * x / (1.0 + x * x);
}

double derivative_absorption(double field, const LineshapeParams& p) {
  const double x = (field - p.center_field) / p.hwhm;
  if (p.shape == LineShape::gaussian)
    return -2.0 * ln2 * x * p.amplitude * std::exp(-ln2 * x * x) / p.hwhm;
  const double d = 1.0 + x * x;
  return -2.0 * p.amplitude * x / (p.hwhm * d * d);
}

double derivative_dispersion(double field, const LineshapeParams& p) {
  const double x = (field - p.center_field) / p.hwhm;
  if (p.shape == LineShape::gaussian) {
    const double u = std::sqrt(ln2) * x;
    return -p.amplitude * two_over_sqrt_pi * (1.0 - 2.0 * u * dawson(u)) * std::sqrt(ln2) / p.hwhm;
  }
  const double d = 1.0 + x * x;
  return -p.amplitude * (1.0 - x * x) / (p.hwhm * d * d);
}

std::complex<double> chi_complex(double field, const LineshapeParams& p) {
  return {chi_dispersion(field, p), -chi_absorption(field, p)};
}

double pp_linewidth(const LineshapeParams& p, WidthAxis axis, const PhysicalConstants& c) {
  p.validate();
  const double width = p.shape == LineShape::gaussian ? 2.0 * p.hwhm / std::sqrt(2.0 * ln2)
                                                      : 2.0 * p.hwhm / std::sqrt(3.0);
  return axis == WidthAxis::field ? width : width * c.resonance_hz_per_tesla();
}

double broadened_absorption(double field, const LineshapeParams& p, const FieldInhomogeneity& inh) {
  const double w = inh.spread() / p.hwhm;
  if (w < min_relative_spread) return chi_absorption(field, p);
  const double x = (field - p.center_field) / p.hwhm;
  const double hi = x + 0.5 * w;
  const double lo = x - 0.5 * w;
  if (p.shape == LineShape::gaussian) {
    const double s = std::sqrt(ln2);
    return p.amplitude / w * 0.5 * std::sqrt(std::numbers::pi) / s * (std::erf(s * hi) - std::erf(s * lo));
  }
  return p.amplitude / w * (std::atan(hi) - std::atan(lo));
}

double broadened_derivative(double field, const LineshapeParams& p, const FieldInhomogeneity& inh) {
  const double w = inh.spread() / p.hwhm;
  if (w < min_relative_spread) return derivative_absorption(field, p);
  const double x = (field - p.center_field) / p.hwhm;
  const double hi = x + 0.5 * w;
  const double lo = x - 0.5 * w;
  if (p.shape == LineShape::gaussian)
    return p.amplitude / (w * p.hwhm) * (std::exp(-ln2 * hi * hi) - std::exp(-ln2 * lo * lo));
  return p.amplitude / (w * p.hwhm) * (1.0 / (1.0 + hi * hi) - 1.0 / (1.0 + lo * lo));
}

double broadened_pp_linewidth(const LineshapeParams& p, const FieldInhomogeneity& inh) {
  p.validate();
  const double w = inh.spread() / p.hwhm;
  // The broadened line stays symmetric, so only the low-field maximum is searched.
  auto neg_derivative = [&](double x) {
    return -broadened_derivative(p.center_field + x * p.hwhm, p, inh);
  };
  const auto [x_max, _] =
      boost::math::tools::brent_find_minima(neg_derivative, -(0.5 * w + 6.0), 0.0, 40);
  return 2.0 * std::abs(x_max) * p.hwhm;
}

std::complex<double> lorentzian_first_harmonic(double x, double m) {
  if (m == 0.0) return {0.0, 0.0};
  // 1/(a + b cos t) = (1/s) [1 + 2 sum (-r)^n cos nt], s = sqrt(a^2 - b^2),
  // r = b/(a + s) on the branch with |r| < 1.
  const std::complex<double> a(1.0, -x);
  const std::complex<double> b(0.0, -m);
  std::complex<double> s = std::sqrt(a * a - b * b);
  if (std::abs(a + s) < std::abs(a - s)) s = -s;
  return -2.0 * b / ((a + s) * s);
}

}  // namespace esrtwin
