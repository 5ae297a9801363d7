#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "esrtwin/baseband.hpp"
#include "esrtwin/calibration.hpp"
#include "esrtwin/sensitivity.hpp"
#include "esrtwin/sweep.hpp"

namespace esrtwin {

enum class SweepMode { field, frequency, grid2d };

SweepMode parse_sweep_mode(const std::string& s);
std::string to_string(SweepMode m);

/// Sweep block in instrument units, kept as written so that a config
/// round-trips exactly.
struct SweepConfig {
  SweepMode mode = SweepMode::field;
  double excitation_start_pct = 6.4;
  double excitation_stop_pct = 6.55;
  double excitation_step_pct = 0.0002;
  double frequency_start_ghz = 4.4;
  double frequency_stop_ghz = 4.8;
  double frequency_step_ghz = 0.0005;
  double drive_frequency_ghz = 4.695;
  double bias_field_mt = 167.7;
  std::optional<double> dwell_s;  // default 6 tau
  double drive_power_dbm = 20.0;
  std::array<std::size_t, 2> decimation{1, 1};
  std::vector<double> dc_offsets_v;
  int samples_per_period = 32;

  bool operator==(const SweepConfig&) const = default;
};

struct SensitivityGridConfig {
  std::vector<double> fields_t{0.17, 0.71, 1.8};
  std::vector<double> temperatures_k{300.0, 77.0, 10.0};
  double resistance_ohm = 1.0;
  double coil_diameter_m = 1.0e-3;

  bool operator==(const SensitivityGridConfig&) const = default;
};

struct NoiseBudgetPoint {
  double b0_t = 0.167;
  double temperature_k = 300.0;

  bool operator==(const NoiseBudgetPoint&) const = default;
};

struct RunConfig {
  PhysicalConstants constants;
  SpinSystem spin;
  LineShape shape = LineShape::lorentzian;
  ResonatorModel resonator;
  LensCalibration calibration;
  ModulationSettings modulation;
  LockInSettings lockin;
  NoiseLedger ledger;
  bool noise_enabled = true;
  bool apply_ledger = true;
  SweepConfig sweep;
  SensitivityGridConfig sensitivity;
  NoiseBudgetPoint noise_budget;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  /// Validate every block; throws ConfigError naming the offending field.
  void validate() const;

  /// Receiver noise: coil Johnson density at the sample temperature, raised by
  /// the ledger total when apply_ledger is set.
  double noise_density() const;
  SignalChain signal_chain() const;
  SweepPlan sweep_plan() const;
  double dwell_time() const;

  bool operator==(const RunConfig&) const = default;
};

/// Strict JSON parsing: unknown keys and wrong types are ConfigErrors. Missing
/// keys keep their defaults.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& cfg);

/// Bundled preset directory (overridable with ESRTWIN_PRESET_DIR).
std::filesystem::path preset_directory();
std::string read_preset(const std::string& name);

/// Preset (if any) with the config file (if any) merged over it as a JSON merge patch.
RunConfig load_run_config(const std::optional<std::string>& preset,
                          const std::optional<std::filesystem::path>& config_file);

double dbm_to_watts(double dbm);

}  // namespace esrtwin
