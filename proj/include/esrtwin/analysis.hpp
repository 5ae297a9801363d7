#pragma once

#include <span>
#include <vector>

#include "esrtwin/sweep.hpp"

namespace esrtwin {

/// Closed interval in axis units.
struct AxisWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Axis position where the trace changes sign between its global maximum and
/// minimum, by linear interpolation. Ties on plateaus go to the first index.
double find_zero_crossing(std::span<const double> axis, std::span<const double> trace);
double find_zero_crossing(const Spectrum& s);

/// Axis distance between the extrema of a derivative line, each refined with a
/// three-point parabola. Throws AnalysisError("no line found") when the trace
/// has no max/min pair of opposite sign.
double extract_pp_linewidth(std::span<const double> axis, std::span<const double> trace);
double extract_pp_linewidth(const Spectrum& s);

/// Peak-to-peak of the trace inside `signal` over the mean-removed RMS inside
/// `noise`. Returns +inf for a noiseless window.
double measure_snr(std::span<const double> axis, std::span<const double> trace, AxisWindow signal,
                   AxisWindow noise);
double measure_snr(const Spectrum& s, AxisWindow signal, AxisWindow noise);

/// Least-squares fit of amplitude * Re c1((axis - center)/width, m/width) + offset,
/// the first harmonic of a modulated Lorentzian. `modulation` is the peak
/// modulation amplitude expressed in axis units.
struct LineFit {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;  // HWHM, axis units
  double offset = 0.0;
  double rms_residual = 0.0;
  bool converged = false;
};

LineFit fit_derivative_line(std::span<const double> axis, std::span<const double> trace, double modulation);

/// Per-row crossing of a 2D sweep (rows = axis1, columns = axis2) and the
/// straight line axis2 = slope * axis1 + intercept through them.
struct LocusFit {
  double slope = 0.0;      // axis2 units per axis1 unit
  double intercept = 0.0;  // axis2 units
  std::vector<double> row_axis1;
  std::vector<double> row_crossing;
  double rms_residual = 0.0;
};

LocusFit fit_crossing_locus(const Spectrum& s, double modulation);

}  // namespace esrtwin
