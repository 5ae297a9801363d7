#pragma once

// Fundamental constants and spin-1/2 ensemble physics. All quantities SI.

namespace esrtwin {

/// CODATA 2018 values. The g-factor is the free-electron-like default used for
/// field <-> frequency conversion; spin systems may carry their own.
struct PhysicalConstants {
  double boltzmann_k = 1.380649e-23;           // J/K
  double planck_hbar = 1.054571817e-34;        // J s
  double bohr_magneton = 9.2740100783e-24;     // J/T
  double vacuum_permeability = 1.25663706212e-6;  // T m/A
  double electron_g_factor = 2.0023;

  double planck_h() const;
  /// gamma = g muB / hbar, rad/(s T)
  double gyromagnetic_ratio() const;
  /// g muB / h, Hz/T (about 28 GHz/T)
  double resonance_hz_per_tesla() const;

  PhysicalConstants with_g(double g) const;

  /// Throws DomainError unless every constant is strictly positive.
  void validate() const;

  bool operator==(const PhysicalConstants&) const = default;
};

struct SpinSystem {
  double spin_density = 1.5e27;       // spins/m^3
  double volume = 3.375e-12;          // m^3
  double temperature = 300.0;         // K
  double g_factor = 2.0023;
  double hwhm_linewidth = 99.0e-6;    // T, absorption half width at half maximum

  double total_spins() const { return spin_density * volume; }
  void validate() const;

  bool operator==(const SpinSystem&) const = default;
};

double resonance_frequency(double b0, const PhysicalConstants& c);
double zeeman_splitting(double b0, const PhysicalConstants& c);

/// Curie-law static magnetization M0 = N gamma^2 hbar^2 B0 / (4 kB T), with
/// gamma built from the spin system's own g-factor. A/m.
double curie_magnetization(const SpinSystem& sys, double b0, const PhysicalConstants& c);

/// Two-level Boltzmann polarization tanh(g muB B0 / (2 kB T)) using c.electron_g_factor.
double boltzmann_polarization(double b0, double temperature, const PhysicalConstants& c);

/// Field per ampere of a one-turn coil, B_u ~ mu0/d. T/A.
double unitary_field(double coil_diameter, const PhysicalConstants& c);

/// sqrt(4 kB T R), V/sqrt(Hz).
double johnson_noise_density(double resistance, double temperature, const PhysicalConstants& c);

}  // namespace esrtwin
