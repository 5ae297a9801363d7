#pragma once

#include <complex>

#include "esrtwin/physics.hpp"

namespace esrtwin {

enum class LineShape { lorentzian, gaussian };

/// Steady-state CW line in field units. `amplitude` is the peak absorptive
/// susceptibility chi0; chi''(center_field) == amplitude.
struct LineshapeParams {
  double center_field = 0.1677;  // T
  double hwhm = 99.0e-6;         // T
  double amplitude = 1.0;        // chi0, dimensionless
  LineShape shape = LineShape::lorentzian;

  void validate() const;
};

/// Polepiece gradient across the sample, modeled as a uniform field-offset
/// distribution of full width |gradient| * sample_extent.
struct FieldInhomogeneity {
  double gradient = 0.0;       // T/m
  double sample_extent = 0.0;  // m

  double spread() const;  // T
};

/// Peak absorptive susceptibility of a Lorentzian line from the Curie
/// magnetization: chi0 = mu0 M0 / (2 dB).
double peak_susceptibility(double static_magnetization, double hwhm, const PhysicalConstants& c = {});

double chi_absorption(double field, const LineshapeParams& p);
double chi_dispersion(double field, const LineshapeParams& p);
double derivative_absorption(double field, const LineshapeParams& p);
double derivative_dispersion(double field, const LineshapeParams& p);

/// Engineering-convention complex susceptibility chi' - j chi''.
std::complex<double> chi_complex(double field, const LineshapeParams& p);

enum class WidthAxis { field, frequency };

/// Peak-to-peak width of the derivative line: 2 dB/sqrt(3) for a Lorentzian.
/// In frequency units the field width is scaled by g muB/h.
double pp_linewidth(const LineshapeParams& p, WidthAxis axis, const PhysicalConstants& c = {});

double broadened_absorption(double field, const LineshapeParams& p, const FieldInhomogeneity& inh);
double broadened_derivative(double field, const LineshapeParams& p, const FieldInhomogeneity& inh);

/// Peak-to-peak width (T) of the broadened derivative, by extremum search.
double broadened_pp_linewidth(const LineshapeParams& p, const FieldInhomogeneity& inh);

/// First Fourier (cosine) coefficient of a unit Lorentzian swept sinusoidally:
/// for u(t) = x + m cos(t), returns c1 of 1/(1 - j u) (physics form), so that
/// real(c1) is the absorptive and -imag(c1) the dispersive harmonic.
/// x and m are in HWHM units. For m -> 0, c1 ~ m * d/dx.
std::complex<double> lorentzian_first_harmonic(double x, double m);

}  // namespace esrtwin
