#include "esrtwin/calibration.hpp"

#include <cfenv>
#include <algorithm>
#include <cmath>
#include <string>

#include "esrtwin/errors.hpp"

namespace esrtwin {

LensCalibration LensCalibration::standard_mode() {
  LensCalibration cal;
  cal.max_field = 1800.0;
  return cal;
}

void LensCalibration::validate(const PhysicalConstants& c) const {
  if (!(field_slope > 0.0) || !(freq_slope > 0.0))
    throw ConfigError("calibration slopes must be > 0");
  if (!(min_step > 0.0)) throw ConfigError("calibration min_step must be > 0");
  if (!(max_field > field_offset)) throw ConfigError("calibration max_field must exceed the field offset");
  // GHz/mT -> Hz/T is a factor 1e12
  const double implied = implied_ghz_per_mt() * 1e12;
  const double expected = c.resonance_hz_per_tesla();
  if (std::abs(implied / expected - 1.0) > 0.02)
    throw ConfigError("calibration lines imply " + std::to_string(implied * 1e-9) +
                      " GHz/T, more than 2% away from g*muB/h");
}

double excitation_to_field(double excitation_pct, const LensCalibration& cal) {
  if (!(excitation_pct >= 0.0)) throw DomainError("objective excitation must be >= 0 %");
  const double field = cal.field_slope * excitation_pct + cal.field_offset;
  if (field > cal.max_field)
    throw RangeError("objective excitation " + std::to_string(excitation_pct) + " % gives " +
                     std::to_string(field) + " mT, beyond the lens range of 0 to " +
                     std::to_string(cal.max_field / 1000.0) + " T at the specimen");
  return field;
}

double field_to_excitation(double field_mt, const LensCalibration& cal) {
  if (field_mt < cal.field_offset)
    throw RangeError("field " + std::to_string(field_mt) + " mT is below the " +
                     std::to_string(cal.field_offset) + " mT remanent offset and cannot be reached");
  if (field_mt > cal.max_field)
    throw RangeError("field " + std::to_string(field_mt) + " mT exceeds the lens ceiling of " +
                     std::to_string(cal.max_field) + " mT");
  return (field_mt - cal.field_offset) / cal.field_slope;
}

double excitation_to_frequency(double excitation_pct, const LensCalibration& cal) {
  if (!(excitation_pct >= 0.0)) throw DomainError("objective excitation must be >= 0 %");
  return cal.freq_slope * excitation_pct + cal.freq_offset;
}

double frequency_to_excitation(double frequency_ghz, const LensCalibration& cal) {
  const double e = (frequency_ghz - cal.freq_offset) / cal.freq_slope;
  if (e < 0.0) throw RangeError("frequency below the calibration intercept");
  return e;
}

double quantize_excitation(double excitation_pct, const LensCalibration& cal) {
  if (!(excitation_pct >= 0.0)) throw DomainError("objective excitation must be >= 0 %");
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double steps = std::nearbyint(excitation_pct / cal.min_step);
  std::fesetround(saved);
  // divide by an exact integer when the step is 1/n so that grid points come out
  // as the nearest doubles to their decimal values
  const double inv = std::round(1.0 / cal.min_step);
  if (std::abs(inv * cal.min_step - 1.0) < 1e-12) return steps / inv;
  return steps * cal.min_step;
}

bool on_step_grid(double excitation_pct, const LensCalibration& cal) {
  const double steps = excitation_pct / cal.min_step;
  return std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, std::abs(steps));
}

double calibration_g_factor(double frequency_ghz, const LensCalibration& cal,
                            const PhysicalConstants& c) {
  const double field_t = excitation_to_field(frequency_to_excitation(frequency_ghz, cal), cal) * 1e-3;
  return c.planck_h() * frequency_ghz * 1e9 / (c.bohr_magneton * field_t);
}

}  // namespace esrtwin
