#include "esrtwin/sensitivity.hpp"

#include <cmath>
#include <numeric>

#include "esrtwin/errors.hpp"

namespace esrtwin {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

}  // namespace

void SensitivityInputs::validate() const {
  require_positive(b0, "B0");
  require_positive(temperature, "temperature");
  require_positive(resistance, "resistance");
  require_positive(coil_diameter, "coil diameter");
  require_positive(spin_density, "spin density");
  require_positive(sample_volume, "sample volume");
  require_positive(b1, "B1");
  require_positive(hwhm, "linewidth");
  require_positive(bandwidth, "noise bandwidth");
  if (b1 > hwhm) throw DomainError("B1 above the linewidth leaves the unsaturated regime");
}

double max_induced_voltage(const SensitivityInputs& in, const PhysicalConstants& c) {
  if (in.hwhm == 0.0) throw DomainError("linewidth dB = 0 makes the induced voltage singular");
  if (in.b1 == 0.0) return 0.0;
  in.validate();
  SpinSystem sys;
  sys.spin_density = in.spin_density;
  sys.volume = in.sample_volume;
  sys.temperature = in.temperature;
  sys.g_factor = c.electron_g_factor;
  sys.hwhm_linewidth = in.hwhm;
  const double m0 = curie_magnetization(sys, in.b0, c);
  return c.gyromagnetic_ratio() * in.b1 * m0 * (in.b0 / in.hwhm) *
         unitary_field(in.coil_diameter, c) * in.sample_volume;
}

double snr(const SensitivityInputs& in, const PhysicalConstants& c) {
  if (!(in.bandwidth > 0.0)) throw DomainError("noise bandwidth must be > 0");
  const double noise_rms =
      johnson_noise_density(in.resistance, in.temperature, c) * std::sqrt(in.bandwidth);
  return max_induced_voltage(in, c) / (3.0 * noise_rms);
}

double spin_sensitivity(double b0, double temperature, double resistance, double coil_diameter,
                        const PhysicalConstants& c) {
  require_positive(b0, "B0");
  require_positive(temperature, "temperature");
  require_positive(resistance, "resistance");
  require_positive(coil_diameter, "coil diameter");
  const double gamma = c.gyromagnetic_ratio();
  const double prefactor =
      24.0 * std::pow(c.boltzmann_k, 1.5) / (gamma * gamma * gamma * c.planck_hbar * c.planck_hbar);
  return prefactor * std::pow(temperature, 1.5) * std::sqrt(resistance) /
         (unitary_field(coil_diameter, c) * b0 * b0);
}

double constructive_spin_sensitivity(const SensitivityInputs& in, const PhysicalConstants& c) {
  return in.spin_density * in.sample_volume / (snr(in, c) * std::sqrt(in.bandwidth));
}

SensitivityTable sensitivity_table(const std::vector<double>& fields,
                                   const std::vector<double>& temperatures, double resistance,
                                   double coil_diameter, const PhysicalConstants& c) {
  if (fields.empty() || temperatures.empty())
    throw ConfigError("sensitivity table needs at least one field and one temperature");
  SensitivityTable table{fields, temperatures, std::vector<double>(fields.size() * temperatures.size())};
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = 0; j < temperatures.size(); ++j)
      table.values[i * temperatures.size() + j] =
          spin_sensitivity(fields[i], temperatures[j], resistance, coil_diameter, c);
  return table;
}

double NoiseLedger::total_db() const {
  return std::accumulate(stages.begin(), stages.end(), 0.0,
                         [](double acc, const NoiseStage& s) { return acc + s.degradation_db; });
}

void NoiseLedger::validate() const {
  for (const auto& s : stages)
    if (!(s.degradation_db >= 0.0))
      throw ConfigError("noise ledger stage '" + s.name + "' has a negative degradation");
  if (!(coupling_efficiency > 0.0 && coupling_efficiency <= 1.0))
    throw ConfigError("coupling efficiency must lie in (0, 1]");
}

NoiseLedger NoiseLedger::microscope_setup() {
  return NoiseLedger{{{"directional coupler", 10.0},
                      {"high pass filter", 0.5},
                      {"LNA", 1.2},
                      {"mixer", 5.5},
                      {"bias tee", 0.2},
                      {"impedance mismatch", 1.5},
                      {"lock-in input noise", 3.0}},
                     1.0};
}

double apply_ledger(double theoretical_nmin, const NoiseLedger& ledger) {
  ledger.validate();
  return theoretical_nmin * std::pow(10.0, ledger.total_db() / 20.0) / ledger.coupling_efficiency;
}

double measured_sensitivity(double total_spins, double measured_snr, double bandwidth) {
  require_positive(total_spins, "spin count");
  require_positive(measured_snr, "SNR");
  require_positive(bandwidth, "noise bandwidth");
  return total_spins / (measured_snr * std::sqrt(bandwidth));
}

double first_order_enbw(double time_constant) {
  require_positive(time_constant, "time constant");
  return 1.0 / (4.0 * time_constant);
}

}  // namespace esrtwin
