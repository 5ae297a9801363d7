#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esrtwin/baseband.hpp"
#include "esrtwin/calibration.hpp"

namespace esrtwin {

enum class AxisKind { excitation, frequency };

/// Inclusive range. Excitation axes are in percent, frequency axes in Hz.
struct SweepAxis {
  AxisKind kind = AxisKind::excitation;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::size_t size() const;
  double value(std::size_t index) const;
  /// Keep every k-th point.
  SweepAxis decimated(std::size_t k) const;
  void validate(const LensCalibration& cal) const;

  bool operator==(const SweepAxis&) const = default;
};

struct SweepPlan {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;  // 2D sweeps: axis1 = excitation rows, axis2 = frequency columns
  double dwell_time = 1.0;          // s per point
  std::uint64_t rng_seed = 1;
  bool noise_enabled = true;
  double drive_frequency = 4.695e9;  // Hz, used when no axis is a frequency axis
  double bias_field = 0.1677;        // T, used when no axis is an excitation axis
  std::vector<double> dc_offsets;    // V added to I, cycled over rows

  void validate(const SignalChain& chain, const LensCalibration& cal) const;

  bool operator==(const SweepPlan&) const = default;
};

enum class Execution { parallel, serial_reference };

struct SpectrumMetadata {
  SweepPlan plan;
  SignalChain chain;
  std::uint64_t seed = 0;
  std::string software_version;
  std::vector<std::string> flags;  // "no crossing detected", "overmodulation"

  bool has_flag(const std::string& flag) const;
};

/// Demodulated sweep. 1D sweeps have cols == 1. Per-point arrays are row-major.
struct Spectrum {
  AxisKind axis1_kind = AxisKind::excitation;
  std::optional<AxisKind> axis2_kind;
  std::vector<double> axis1;  // % or Hz
  std::vector<double> axis2;
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::vector<double> bias_field;       // T
  std::vector<double> drive_frequency;  // Hz
  std::vector<double> i;                // V
  std::vector<double> q;                // V
  SpectrumMetadata metadata;

  std::size_t size() const { return i.size(); }
  /// I trace of one row (2D) or of the whole sweep (1D).
  std::vector<double> row_i(std::size_t row) const;
  std::vector<double> row_q(std::size_t row) const;
};

Spectrum run_field_sweep(const SweepPlan& plan, const LensCalibration& cal, const SignalChain& chain,
                         Execution exec = Execution::parallel);

Spectrum run_frequency_sweep(const SweepPlan& plan, const SignalChain& chain,
                             Execution exec = Execution::parallel);

Spectrum run_2d_sweep(const SweepPlan& plan, const LensCalibration& cal, const SignalChain& chain,
                      Execution exec = Execution::parallel);

namespace reference {

/// Serial reference for one sweep point: materialize the baseband series, then demodulate.
LockInOutput measure_point(const SignalChain& chain, const OperatingPoint& point, double duration,
                           NoiseEngine& rng);

}  // namespace reference

}  // namespace esrtwin
