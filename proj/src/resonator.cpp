#include "esrtwin/resonator.hpp"

#include <cmath>

#include "esrtwin/errors.hpp"

namespace esrtwin {

using namespace std::complex_literals;

void ResonatorModel::validate() const {
  if (!(center_frequency > 0.0)) throw ConfigError("resonator center frequency must be > 0");
  if (!(quality_factor > 0.0)) throw ConfigError("resonator Q must be > 0");
  if (!(coupling > 0.0)) throw ConfigError("resonator coupling beta must be > 0");
  if (!(coil_diameter > 0.0)) throw ConfigError("coil diameter must be > 0");
  if (!(equivalent_resistance >= 0.0)) throw ConfigError("equivalent resistance must be >= 0");
  if (!(filling_factor > 0.0 && filling_factor <= 1.0))
    throw ConfigError("filling factor must lie in (0, 1]");
  if (!(reference_impedance > 0.0)) throw ConfigError("reference impedance must be > 0");
}

double detuning(double frequency, const ResonatorModel& m) {
  if (!(frequency > 0.0)) throw DomainError("drive frequency must be > 0");
  return frequency / m.center_frequency - m.center_frequency / frequency;
}

namespace {

// normalized input impedance of the coupled resonator, z = Zin/Z0
std::complex<double> normalized_impedance(double frequency, const ResonatorModel& m) {
  return (1.0 + 1i * m.quality_factor * detuning(frequency, m)) / m.coupling;
}

}  // namespace

std::complex<double> reflection_coefficient(double frequency, const ResonatorModel& m) {
  const double qd = m.quality_factor * detuning(frequency, m);
  const double b = m.coupling;
  return std::complex<double>(b - 1.0, -qd) / std::complex<double>(b + 1.0, qd);
}

double b1_field(double input_power, const ResonatorModel& m, const PhysicalConstants& c) {
  if (!(input_power >= 0.0)) throw DomainError("input power must be >= 0");
  if (input_power == 0.0) return 0.0;
  if (m.equivalent_resistance == 0.0)
    throw DomainError("b1_field: zero coil resistance with finite power is a singular model");
  const double b = m.coupling;
  const double current =
      std::sqrt(2.0 * b / ((1.0 + b) * (1.0 + b)) * 4.0 * input_power / m.equivalent_resistance);
  return 0.5 * unitary_field(m.coil_diameter, c) * current;
}

std::complex<double> perturbation_gain(double frequency, const ResonatorModel& m) {
  // Gamma = (1 - z)/(1 + z); L -> L(1 + eta chi) gives dz = j eta Q (nu/f_res) chi / beta
  const std::complex<double> z = normalized_impedance(frequency, m);
  const std::complex<double> dgamma_dz = -2.0 / ((1.0 + z) * (1.0 + z));
  const std::complex<double> dz_dchi =
      1i * m.filling_factor * m.quality_factor * (frequency / m.center_frequency) / m.coupling;
  return dgamma_dz * dz_dchi;
}

std::complex<double> signal_perturbation(std::complex<double> chi, const ResonatorModel& m) {
  const double b = m.coupling;
  return -2i * m.filling_factor * m.quality_factor * b / ((b + 1.0) * (b + 1.0)) * chi;
}

std::complex<double> signal_perturbation(std::complex<double> chi, double frequency,
                                         const ResonatorModel& m) {
  return perturbation_gain(frequency, m) * chi;
}

}  // namespace esrtwin
