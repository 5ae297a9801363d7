#pragma once

#include <string>
#include <vector>

#include "esrtwin/physics.hpp"

namespace esrtwin {

/// Operating point for the induced-voltage / SNR estimate. SI units.
struct SensitivityInputs {
  double b0 = 0.167;               // T
  double temperature = 300.0;      // K
  double resistance = 1.0;         // ohm, noise-equivalent coil resistance
  double coil_diameter = 1.0e-3;   // m
  double spin_density = 1.5e27;    // spins/m^3
  double sample_volume = 3.375e-12;  // m^3
  double b1 = 99.0e-6;             // T
  double hwhm = 99.0e-6;           // T
  double bandwidth = 2.5;          // Hz, equivalent noise bandwidth

  /// All positive; b1 <= hwhm (the "B1 up to dB" operating point).
  void validate() const;
};

/// xi_max = gamma B1 M0 (B0/dB) B_u V_s
double max_induced_voltage(const SensitivityInputs& in, const PhysicalConstants& c = {});

/// SNR = xi_max / (3 sqrt(4 kB T R df))
double snr(const SensitivityInputs& in, const PhysicalConstants& c = {});

/// Closed-form theoretical spin sensitivity, spins/sqrt(Hz):
/// 24 kB^{3/2} / (gamma^3 hbar^2) * T^{3/2} sqrt(R) / (B_u B0^2).
double spin_sensitivity(double b0, double temperature, double resistance, double coil_diameter,
                        const PhysicalConstants& c = {});

/// The same quantity built as N V_s / (SNR sqrt(df)) from the full signal chain.
/// Equal to the closed form when in.b1 == in.hwhm.
double constructive_spin_sensitivity(const SensitivityInputs& in, const PhysicalConstants& c = {});

/// B0 x T grid of spin sensitivities, row-major (fields are rows).
struct SensitivityTable {
  std::vector<double> fields;        // T
  std::vector<double> temperatures;  // K
  std::vector<double> values;        // spins/sqrt(Hz)

  double at(std::size_t field_index, std::size_t temperature_index) const {
    return values[field_index * temperatures.size() + temperature_index];
  }
};

SensitivityTable sensitivity_table(const std::vector<double>& fields,
                                   const std::vector<double>& temperatures, double resistance,
                                   double coil_diameter, const PhysicalConstants& c = {});

struct NoiseStage {
  std::string name;
  double degradation_db = 0.0;

  bool operator==(const NoiseStage&) const = default;
};

/// Ordered dB degradations of the detection chain plus a sample-coupling loss.
struct NoiseLedger {
  std::vector<NoiseStage> stages;
  double coupling_efficiency = 1.0;

  double total_db() const;
  void validate() const;

  /// The seven stages of the in-microscope setup (21.9 dB).
  static NoiseLedger microscope_setup();

  bool operator==(const NoiseLedger&) const = default;
};

/// degraded = theoretical * 10^(total_dB/20) / coupling_efficiency
double apply_ledger(double theoretical_nmin, const NoiseLedger& ledger);

/// N_min = total_spins / (SNR sqrt(df))
double measured_sensitivity(double total_spins, double measured_snr, double bandwidth);

/// Equivalent noise bandwidth of a first-order low-pass with time constant tau.
double first_order_enbw(double time_constant);

}  // namespace esrtwin
