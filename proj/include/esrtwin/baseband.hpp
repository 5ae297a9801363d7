#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "esrtwin/lineshape.hpp"
#include "esrtwin/physics.hpp"
#include "esrtwin/resonator.hpp"

namespace esrtwin {

struct ModulationSettings {
  double frequency = 101.0e3;  // Hz
  double amplitude = 9.9e-6;   // T, peak
  double phase = 0.0;          // rad

  void validate() const;
  /// B_m > dB/2
  bool overmodulated(double hwhm) const { return amplitude > 0.5 * hwhm; }

  bool operator==(const ModulationSettings&) const = default;
};

/// First-order lock-in. `mixer_phase` is the microwave reference phase relative
/// to the resonator's absorptive response (0 = absorption, pi/2 = dispersion).
/// With `track_resonator_phase` the absorptive reference follows the drive
/// frequency, as when the bridge phase is re-tuned at every point; otherwise it
/// is frozen at the resonator center frequency.
struct LockInSettings {
  double time_constant = 0.1;  // s
  double reference_phase = 0.0;  // rad
  double mixer_phase = 0.0;    // rad
  bool track_resonator_phase = true;

  double enbw() const { return 1.0 / (4.0 * time_constant); }
  void validate() const;

  bool operator==(const LockInSettings&) const = default;
};

struct NoiseSettings {
  bool enabled = false;
  double density = 0.0;  // V/sqrt(Hz), one-sided, per quadrature

  bool operator==(const NoiseSettings&) const = default;
};

/// Every instrument and sample setting that stays fixed over a sweep.
struct SignalChain {
  PhysicalConstants constants;
  SpinSystem spin;
  LineShape shape = LineShape::lorentzian;
  ResonatorModel resonator;
  ModulationSettings modulation;
  LockInSettings lockin;
  double drive_power = 0.1;  // W at the resonator port
  NoiseSettings noise;
  int samples_per_period = 32;

  /// Peak incident wave amplitude sqrt(2 P Z0), V.
  double drive_amplitude() const;
  double sample_rate() const { return samples_per_period * modulation.frequency; }
  /// Spin resonance field for a drive frequency, using the sample's g-factor.
  double resonance_field(double drive_frequency) const;
  LineshapeParams lineshape_at(double bias_field, double drive_frequency) const;

  void validate() const;

  bool operator==(const SignalChain&) const = default;
};

struct OperatingPoint {
  double drive_frequency = 4.695e9;  // Hz
  double bias_field = 0.1677;        // T
};

/// Complex envelope of the reflected microwave, sampled on a whole number of
/// samples per modulation period.
struct BasebandSeries {
  std::vector<std::complex<double>> samples;
  double modulation_frequency = 101.0e3;
  int samples_per_period = 32;
  /// Phase of the absorptive response; the mixer phase is applied on top of it.
  double detection_phase = 0.0;

  double sample_rate() const { return samples_per_period * modulation_frequency; }
};

struct LockInOutput {
  double i = 0.0;  // V rms, mean over the final time constant
  double q = 0.0;
  double i_final = 0.0;  // last filter sample
  double q_final = 0.0;
};

using NoiseEngine = std::mt19937_64;

/// Independent noise stream for sweep point `index` under `seed`.
NoiseEngine point_engine(std::uint64_t seed, std::uint64_t index);

/// V(t) = A [Gamma(nu) + dGamma(chi(B0 + B_m cos(2 pi f_mod t + phase)))] + noise.
BasebandSeries synthesize_baseband(const SignalChain& chain, const OperatingPoint& point,
                                   double duration, NoiseEngine& rng);

/// Mix with the microwave reference, multiply by sqrt(2) cos / -sqrt(2) sin of the
/// modulation reference, low-pass with time constant tau. An input
/// A cos(2 pi f_mod t + phi) gives I = A/sqrt(2) cos(phi), Q = A/sqrt(2) sin(phi).
LockInOutput lockin_demodulate(const BasebandSeries& series, const LockInSettings& lockin);

/// Streaming equivalent of synthesize_baseband + lockin_demodulate that never
/// materializes the series. Bitwise identical to the two-step path.
LockInOutput acquire_point(const SignalChain& chain, const OperatingPoint& point, double duration,
                           NoiseEngine& rng);

/// Minimum record length accepted by the lock-in: five time constants.
double settling_guard(const LockInSettings& lockin);

}  // namespace esrtwin
