#include "esrtwin/physics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "esrtwin/errors.hpp"

namespace esrtwin {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(what) + " must be finite and > 0");
}

void require_field(double b0) {
  if (!(b0 >= 0.0) || !std::isfinite(b0))
    throw DomainError("bias field B0 must be finite and >= 0 T");
}

}  // namespace

double PhysicalConstants::planck_h() const { return 2.0 * std::numbers::pi * planck_hbar; }

double PhysicalConstants::gyromagnetic_ratio() const {
  return electron_g_factor * bohr_magneton / planck_hbar;
}

double PhysicalConstants::resonance_hz_per_tesla() const {
  return electron_g_factor * bohr_magneton / planck_h();
}

PhysicalConstants PhysicalConstants::with_g(double g) const {
  PhysicalConstants copy = *this;
  copy.electron_g_factor = g;
  return copy;
}

void PhysicalConstants::validate() const {
  require_positive(boltzmann_k, "boltzmann_k");
  require_positive(planck_hbar, "planck_hbar");
  require_positive(bohr_magneton, "bohr_magneton");
  require_positive(vacuum_permeability, "vacuum_permeability");
  require_positive(electron_g_factor, "g_factor");
}

void SpinSystem::validate() const {
  require_positive(spin_density, "spin_density");
  require_positive(volume, "sample volume");
  require_positive(temperature, "temperature");
  require_positive(g_factor, "g_factor");
  require_positive(hwhm_linewidth, "hwhm_linewidth");
  if (!std::isfinite(total_spins())) throw DomainError("total spin count N*V_s is not finite");
}

double resonance_frequency(double b0, const PhysicalConstants& c) {
  require_field(b0);
  return c.resonance_hz_per_tesla() * b0;
}

double zeeman_splitting(double b0, const PhysicalConstants& c) {
  require_field(b0);
  return c.electron_g_factor * c.bohr_magneton * b0;
}

double curie_magnetization(const SpinSystem& sys, double b0, const PhysicalConstants& c) {
  require_field(b0);
  require_positive(sys.temperature, "temperature");
  const double gamma_hbar = sys.g_factor * c.bohr_magneton;  // gamma * hbar
  return sys.spin_density * gamma_hbar * gamma_hbar * b0 / (4.0 * c.boltzmann_k * sys.temperature);
}

double boltzmann_polarization(double b0, double temperature, const PhysicalConstants& c) {
  require_field(b0);
  require_positive(temperature, "temperature");
  return std::tanh(zeeman_splitting(b0, c) / (2.0 * c.boltzmann_k * temperature));
}

double unitary_field(double coil_diameter, const PhysicalConstants& c) {
  require_positive(coil_diameter, "coil diameter");
  return c.vacuum_permeability / coil_diameter;
}

double johnson_noise_density(double resistance, double temperature, const PhysicalConstants& c) {
  if (!(resistance >= 0.0)) throw DomainError("resistance must be >= 0");
  require_positive(temperature, "temperature");
  return std::sqrt(4.0 * c.boltzmann_k * temperature * resistance);
}

}  // namespace esrtwin
