#pragma once

#include "esrtwin/physics.hpp"

namespace esrtwin {

/// Affine objective-lens calibration. Unlike the rest of the library this type
/// works in instrument units: excitation in percent, field in mT, frequency in GHz.
struct LensCalibration {
  double field_slope = 22.86;    // mT per % excitation
  double field_offset = 19.14;   // mT (minicondenser leakage + polepiece remanence)
  double freq_slope = 0.64;      // GHz per %
  double freq_offset = 0.536;    // GHz
  double min_step = 0.0001;      // %
  double max_field = 800.0;      // mT, low-magnification-mode ceiling

  /// Standard-mode variant: same lines, 1.8 T ceiling.
  static LensCalibration standard_mode();

  /// Field-to-frequency slope implied by the two lines, GHz/mT.
  double implied_ghz_per_mt() const { return freq_slope / field_slope; }

  void validate(const PhysicalConstants& c = {}) const;

  bool operator==(const LensCalibration&) const = default;
};

double excitation_to_field(double excitation_pct, const LensCalibration& cal);
double field_to_excitation(double field_mt, const LensCalibration& cal);
double excitation_to_frequency(double excitation_pct, const LensCalibration& cal);
double frequency_to_excitation(double frequency_ghz, const LensCalibration& cal);

/// Round to the nearest lens step, ties to even.
double quantize_excitation(double excitation_pct, const LensCalibration& cal);

/// True when the value sits on the lens step grid (to 1e-9 of a step).
bool on_step_grid(double excitation_pct, const LensCalibration& cal);

/// g-factor at which the field line and the frequency line describe the same
/// resonance at the given drive frequency, i.e. the g of the reference sample
/// used to calibrate the lens.
double calibration_g_factor(double frequency_ghz, const LensCalibration& cal,
                            const PhysicalConstants& c = {});

}  // namespace esrtwin
