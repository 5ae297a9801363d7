#include "esrtwin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "esrtwin/errors.hpp"
#include "esrtwin/lineshape.hpp"

namespace esrtwin {

namespace {

void check_trace(std::span<const double> axis, std::span<const double> trace) {
  if (axis.size() != trace.size()) throw AnalysisError("axis and trace lengths differ");
  if (trace.size() < 3) throw AnalysisError("no line found: trace has fewer than 3 points");
}

struct Extrema {
  std::size_t max;
  std::size_t min;
};

Extrema extrema(std::span<const double> trace) {
  Extrema e{0, 0};
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (trace[k] > trace[e.max]) e.max = k;
    if (trace[k] < trace[e.min]) e.min = k;
  }
  if (!(trace[e.max] > 0.0) || !(trace[e.min] < 0.0)) throw AnalysisError("no line found");
  return e;
}

// vertex of the parabola through (k-1, k, k+1)
double refine(std::span<const double> axis, std::span<const double> trace, std::size_t k) {
  if (k == 0 || k + 1 >= trace.size()) return axis[k];
  const double x0 = axis[k - 1], x1 = axis[k], x2 = axis[k + 1];
  const double y0 = trace[k - 1], y1 = trace[k], y2 = trace[k + 1];
  const double d1 = (y1 - y0) / (x1 - x0);
  const double d2 = (y2 - y1) / (x2 - x1);
  const double curv = (d2 - d1) / (x2 - x0);
  if (curv == 0.0) return x1;
  const double v = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
  return std::clamp(v, std::min(x0, x2), std::max(x0, x2));
}

std::vector<double> in_window(std::span<const double> axis, std::span<const double> trace, AxisWindow w) {
  std::vector<double> out;
  for (std::size_t k = 0; k < axis.size(); ++k)
    if (axis[k] >= w.lo && axis[k] <= w.hi) out.push_back(trace[k]);
  return out;
}

double harmonic_shape(double x, double m) {
  if (m <= 0.0) return -2.0 * x / ((1.0 + x * x) * (1.0 + x * x));
  return lorentzian_first_harmonic(x, m).real() / m;
}

struct LineFunctor : Eigen::DenseFunctor<double> {
  std::span<const double> axis;
  std::span<const double> trace;
  double modulation;

  LineFunctor(std::span<const double> a, std::span<const double> t, double m)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(a.size())), axis(a), trace(t), modulation(m) {}

  // p = {amplitude, center, log(width), offset}
  int operator()(const InputType& p, ValueType& r) const {
    const double w = std::exp(p[2]);
    for (std::size_t k = 0; k < axis.size(); ++k)
      r[static_cast<Eigen::Index>(k)] =
          p[0] * harmonic_shape((axis[k] - p[1]) / w, modulation / w) + p[3] - trace[k];
    return 0;
  }
};

// amplitude and offset for a fixed shape, by linear least squares
std::pair<double, double> linear_solve(const std::vector<double>& shape, std::span<const double> trace,
                                       double& sse) {
  const double n = static_cast<double>(shape.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    sx += shape[k];
    sy += trace[k];
    sxx += shape[k] * shape[k];
    sxy += shape[k] * trace[k];
  }
  const double det = n * sxx - sx * sx;
  if (det <= 0.0) {
    sse = std::numeric_limits<double>::infinity();
    return {0.0, 0.0};
  }
  const double a = (n * sxy - sx * sy) / det;
  const double d = (sy - a * sx) / n;
  sse = 0.0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const double r = a * shape[k] + d - trace[k];
    sse += r * r;
  }
  return {a, d};
}

}  // namespace

double find_zero_crossing(std::span<const double> axis, std::span<const double> trace) {
  check_trace(axis, trace);
  const Extrema e = extrema(trace);
  const std::size_t lo = std::min(e.max, e.min);
  const std::size_t hi = std::max(e.max, e.min);
  for (std::size_t k = lo; k < hi; ++k) {
    const double y0 = trace[k], y1 = trace[k + 1];
    if (y0 == 0.0) return axis[k];
    if ((y0 > 0.0) != (y1 > 0.0)) return axis[k] + (axis[k + 1] - axis[k]) * y0 / (y0 - y1);
  }
  throw AnalysisError("no line found: no sign change between the extrema");
}

double find_zero_crossing(const Spectrum& s) { return find_zero_crossing(s.axis1, s.i); }

double extract_pp_linewidth(std::span<const double> axis, std::span<const double> trace) {
  check_trace(axis, trace);
  const Extrema e = extrema(trace);
  return std::abs(refine(axis, trace, e.max) - refine(axis, trace, e.min));
}

double extract_pp_linewidth(const Spectrum& s) { return extract_pp_linewidth(s.axis1, s.i); }

double measure_snr(std::span<const double> axis, std::span<const double> trace, AxisWindow signal,
                   AxisWindow noise) {
  if (axis.size() != trace.size()) throw AnalysisError("axis and trace lengths differ");
  if (axis.empty()) throw AnalysisError("empty trace");
  const auto [amin, amax] = std::minmax_element(axis.begin(), axis.end());
  for (const AxisWindow& w : {signal, noise}) {
    if (!(w.lo < w.hi)) throw AnalysisError("window needs lo < hi");
    if (w.lo < *amin || w.hi > *amax) throw AnalysisError("window outside the axis range");
  }
  if (signal.lo <= noise.hi && noise.lo <= signal.hi) throw AnalysisError("signal and noise windows overlap");

  const auto sig = in_window(axis, trace, signal);
  const auto bg = in_window(axis, trace, noise);
  if (sig.empty() || bg.empty()) throw AnalysisError("empty window");

  const auto [smin, smax] = std::minmax_element(sig.begin(), sig.end());
  const double pp = *smax - *smin;
  const double mean = std::accumulate(bg.begin(), bg.end(), 0.0) / static_cast<double>(bg.size());
  double ss = 0.0;
  for (double v : bg) ss += (v - mean) * (v - mean);
  const double rms = std::sqrt(ss / static_cast<double>(bg.size()));
  if (rms == 0.0) return std::numeric_limits<double>::infinity();
  return pp / rms;
}

double measure_snr(const Spectrum& s, AxisWindow signal, AxisWindow noise) {
  return measure_snr(s.axis1, s.i, signal, noise);
}

LineFit fit_derivative_line(std::span<const double> axis, std::span<const double> trace, double modulation) {
  check_trace(axis, trace);
  const Extrema e = extrema(trace);
  const std::size_t n = axis.size();
  const double span_width = std::abs(axis[n - 1] - axis[0]);
  const double step = span_width / static_cast<double>(n - 1);

  // coarse grid over center near the extrema pair and log-spaced widths
  const std::size_t lo = std::min(e.max, e.min) > 2 ? std::min(e.max, e.min) - 2 : 0;
  const std::size_t hi = std::min(n - 1, std::max(e.max, e.min) + 2);
  const double c0 = std::min(axis[lo], axis[hi]);
  const double c1 = std::max(axis[lo], axis[hi]);
  constexpr int n_center = 81;
  constexpr int n_width = 40;
  const double w_min = std::max(0.05 * step, 1e-6 * span_width);
  const double w_max = 0.25 * span_width;

  Eigen::VectorXd best(4);
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<double> shape(n);
  for (int iw = 0; iw < n_width; ++iw) {
    const double w = w_min * std::pow(w_max / w_min, iw / double(n_width - 1));
    for (int ic = 0; ic < n_center; ++ic) {
      const double c = c0 + (c1 - c0) * ic / double(n_center - 1);
      for (std::size_t k = 0; k < n; ++k) shape[k] = harmonic_shape((axis[k] - c) / w, modulation / w);
      double sse = 0.0;
      const auto [a, d] = linear_solve(shape, trace, sse);
      if (sse < best_sse) {
        best_sse = sse;
        best << a, c, std::log(w), d;
      }
    }
  }

  LineFunctor f(axis, trace, modulation);
  Eigen::NumericalDiff<LineFunctor> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LineFunctor>> lm(nd);
  lm.setXtol(1e-12);
  lm.setFtol(1e-14);
  lm.setMaxfev(2000);
  Eigen::VectorXd p = best;
  const auto status = lm.minimize(p);

  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  f(p, r);
  LineFit fit;
  fit.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters && std::isfinite(r.norm());
  if (!fit.converged || r.squaredNorm() > best_sse) {
    p = best;
    f(p, r);
  }
  fit.amplitude = p[0];
  fit.center = p[1];
  fit.width = std::exp(p[2]);
  fit.offset = p[3];
  fit.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));
  return fit;
}

LocusFit fit_crossing_locus(const Spectrum& s, double modulation) {
  if (!s.axis2_kind || s.rows < 2 || s.cols < 3) throw AnalysisError("crossing locus needs a 2D sweep");
  LocusFit out;
  const double lo = std::min(s.axis2.front(), s.axis2.back());
  const double hi = std::max(s.axis2.front(), s.axis2.back());
  for (std::size_t r = 0; r < s.rows; ++r) {
    const auto row = s.row_i(r);
    try {
      const LineFit fit = fit_derivative_line(s.axis2, row, modulation);
      if (fit.center < lo || fit.center > hi) continue;
      out.row_axis1.push_back(s.axis1[r]);
      out.row_crossing.push_back(fit.center);
    } catch (const AnalysisError&) {
      // row without a line
    }
  }
  const std::size_t n = out.row_axis1.size();
  if (n < 2) throw AnalysisError("no line found: fewer than two rows with a crossing");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    a(static_cast<Eigen::Index>(k), 0) = out.row_axis1[k];
    a(static_cast<Eigen::Index>(k), 1) = 1.0;
    y[static_cast<Eigen::Index>(k)] = out.row_crossing[k];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  out.slope = coef[0];
  out.intercept = coef[1];
  out.rms_residual = std::sqrt((a * coef - y).squaredNorm() / static_cast<double>(n));
  return out;
}

}  // namespace esrtwin
