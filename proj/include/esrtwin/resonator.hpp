#pragma once

#include <complex>

#include "esrtwin/physics.hpp"

namespace esrtwin {

/// Lumped model of the impedance-matched planar microresonator: a series RLC
/// (the coil) behind an ideal matching transformer.
///
/// Sign conventions: time dependence e^{+j omega t}; susceptibility
/// chi = chi' - j chi'' so that absorption (chi'' > 0) adds coil loss.
/// The reflection coefficient is taken at the coupling port as
/// (Z0 - Zin)/(Z0 + Zin), which makes an overcoupled resonator (beta > 1)
/// reflect with Gamma > 0 on resonance.
struct ResonatorModel {
  double center_frequency = 4.5e9;     // Hz
  double quality_factor = 30.0;        // unloaded Q
  double coupling = 1.0;               // beta, 1 = critical
  double coil_diameter = 1.0e-3;       // m
  double equivalent_resistance = 1.0;  // ohm
  double filling_factor = 0.1;
  double reference_impedance = 50.0;   // ohm

  void validate() const;

  bool operator==(const ResonatorModel&) const = default;
};

/// delta = nu/f_res - f_res/nu
double detuning(double frequency, const ResonatorModel& m);

/// Gamma = (beta - 1 - j Q delta) / (beta + 1 + j Q delta)
std::complex<double> reflection_coefficient(double frequency, const ResonatorModel& m);

/// Rotating-frame drive field at resonance for a given generator power (W).
/// Coil current I = sqrt(2 beta/(1+beta)^2 * 4P/R), B1 = B_u(d) I / 2.
double b1_field(double input_power, const ResonatorModel& m, const PhysicalConstants& c = {});

/// d Gamma / d chi at the given drive frequency (linear response of the
/// reflection to a filling-factor-weighted change of the coil inductance).
std::complex<double> perturbation_gain(double frequency, const ResonatorModel& m);

/// Reflection change caused by sample susceptibility chi at resonance:
/// -2j eta Q beta chi / (beta+1)^2.
std::complex<double> signal_perturbation(std::complex<double> chi, const ResonatorModel& m);

/// Same, at an arbitrary drive frequency.
std::complex<double> signal_perturbation(std::complex<double> chi, double frequency,
                                         const ResonatorModel& m);

}  // namespace esrtwin
