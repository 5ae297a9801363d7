#include "esrtwin/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "esrtwin/errors.hpp"

#ifndef ESRTWIN_PRESET_DIR
#define ESRTWIN_PRESET_DIR "presets"
#endif

namespace esrtwin {

using nlohmann::json;

SweepMode parse_sweep_mode(const std::string& s) {
  if (s == "field") return SweepMode::field;
  if (s == "frequency") return SweepMode::frequency;
  if (s == "2d") return SweepMode::grid2d;
  throw ConfigError("sweep mode must be one of field, frequency, 2d (got \"" + s + "\")");
}

std::string to_string(SweepMode m) {
  switch (m) {
    case SweepMode::field: return "field";
    case SweepMode::frequency: return "frequency";
    case SweepMode::grid2d: return "2d";
  }
  return "field";
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

namespace {

// Reads the keys of one JSON object and rejects whatever it did not read.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  void get(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array of numbers");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  void get(const char* key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) fail(key, "expected a number or null");
      out = v->get<double>();
    }
  }

  const json* child(const char* key) { return find(key); }
  std::string path(const char* key) const { return path_ + "." + key; }

  [[noreturn]] void fail(const char* key, const std::string& what) const {
    throw ConfigError(path(key) + ": " + what);
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError(path_ + "." + item.key() + ": unknown key");
  }

 private:
  const json* find(const char* key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class F>
void with_block(Block& parent, const char* key, F&& f) {
  if (const json* v = parent.child(key)) {
    Block b(*v, parent.path(key));
    f(b);
    b.finish();
  }
}

template <class F>
void checked(const std::string& where, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  const json root = parse_json(text, "config");
  RunConfig c;
  Block top(root, "config");

  with_block(top, "constants", [&](Block& b) {
    b.get("boltzmann_k", c.constants.boltzmann_k);
    b.get("planck_hbar", c.constants.planck_hbar);
    b.get("bohr_magneton", c.constants.bohr_magneton);
    b.get("vacuum_permeability", c.constants.vacuum_permeability);
    b.get("electron_g_factor", c.constants.electron_g_factor);
  });
  with_block(top, "spin_system", [&](Block& b) {
    b.get("spin_density_per_m3", c.spin.spin_density);
    b.get("volume_m3", c.spin.volume);
    b.get("temperature_K", c.spin.temperature);
    b.get("g_factor", c.spin.g_factor);
    b.get("hwhm_linewidth_T", c.spin.hwhm_linewidth);
  });
  with_block(top, "lineshape", [&](Block& b) {
    std::string shape = c.shape == LineShape::lorentzian ? "lorentzian" : "gaussian";
    b.get("shape", shape);
    if (shape == "lorentzian")
      c.shape = LineShape::lorentzian;
    else if (shape == "gaussian")
      c.shape = LineShape::gaussian;
    else
      b.fail("shape", "expected \"lorentzian\" or \"gaussian\"");
  });
  with_block(top, "resonator", [&](Block& b) {
    b.get("center_frequency_Hz", c.resonator.center_frequency);
    b.get("quality_factor", c.resonator.quality_factor);
    b.get("coupling", c.resonator.coupling);
    b.get("coil_diameter_m", c.resonator.coil_diameter);
    b.get("equivalent_resistance_ohm", c.resonator.equivalent_resistance);
    b.get("filling_factor", c.resonator.filling_factor);
    b.get("reference_impedance_ohm", c.resonator.reference_impedance);
  });
  with_block(top, "calibration", [&](Block& b) {
    b.get("field_slope_mT_per_pct", c.calibration.field_slope);
    b.get("field_offset_mT", c.calibration.field_offset);
    b.get("freq_slope_GHz_per_pct", c.calibration.freq_slope);
    b.get("freq_offset_GHz", c.calibration.freq_offset);
    b.get("min_step_pct", c.calibration.min_step);
    b.get("max_field_mT", c.calibration.max_field);
  });
  with_block(top, "modulation", [&](Block& b) {
    b.get("frequency_Hz", c.modulation.frequency);
    b.get("amplitude_T", c.modulation.amplitude);
    b.get("phase_rad", c.modulation.phase);
  });
  with_block(top, "lockin", [&](Block& b) {
    b.get("time_constant_s", c.lockin.time_constant);
    b.get("reference_phase_rad", c.lockin.reference_phase);
    b.get("mixer_phase_rad", c.lockin.mixer_phase);
    b.get("track_resonator_phase", c.lockin.track_resonator_phase);
  });
  with_block(top, "ledger", [&](Block& b) {
    b.get("coupling_efficiency", c.ledger.coupling_efficiency);
    if (const json* stages = b.child("stages")) {
      if (!stages->is_array()) b.fail("stages", "expected an array");
      c.ledger.stages.clear();
      for (std::size_t k = 0; k < stages->size(); ++k) {
        Block s((*stages)[k], b.path("stages") + "[" + std::to_string(k) + "]");
        NoiseStage stage;
        s.get("name", stage.name);
        s.get("dB", stage.degradation_db);
        s.finish();
        c.ledger.stages.push_back(stage);
      }
    }
  });
  with_block(top, "noise", [&](Block& b) {
    b.get("enabled", c.noise_enabled);
    b.get("apply_ledger", c.apply_ledger);
  });
  with_block(top, "sweep", [&](Block& b) {
    std::string mode = to_string(c.sweep.mode);
    b.get("mode", mode);
    checked(b.path("mode"), [&] { c.sweep.mode = parse_sweep_mode(mode); });
    with_block(b, "excitation", [&](Block& e) {
      e.get("start_pct", c.sweep.excitation_start_pct);
      e.get("stop_pct", c.sweep.excitation_stop_pct);
      e.get("step_pct", c.sweep.excitation_step_pct);
    });
    with_block(b, "frequency", [&](Block& f) {
      f.get("start_GHz", c.sweep.frequency_start_ghz);
      f.get("stop_GHz", c.sweep.frequency_stop_ghz);
      f.get("step_GHz", c.sweep.frequency_step_ghz);
    });
    b.get("drive_frequency_GHz", c.sweep.drive_frequency_ghz);
    b.get("bias_field_mT", c.sweep.bias_field_mt);
    b.get("dwell_s", c.sweep.dwell_s);
    b.get("drive_power_dBm", c.sweep.drive_power_dbm);
    b.get("samples_per_period", c.sweep.samples_per_period);
    b.get("dc_offsets_V", c.sweep.dc_offsets_v);
    if (const json* d = b.child("decimation")) {
      if (!d->is_array() || d->size() != 2 || !(*d)[0].is_number_unsigned() || !(*d)[1].is_number_unsigned())
        b.fail("decimation", "expected [rows, columns] as two positive integers");
      c.sweep.decimation = {(*d)[0].get<std::size_t>(), (*d)[1].get<std::size_t>()};
    }
  });
  with_block(top, "sensitivity", [&](Block& b) {
    b.get("fields_T", c.sensitivity.fields_t);
    b.get("temperatures_K", c.sensitivity.temperatures_k);
    b.get("resistance_ohm", c.sensitivity.resistance_ohm);
    b.get("coil_diameter_m", c.sensitivity.coil_diameter_m);
  });
  with_block(top, "noise_budget", [&](Block& b) {
    b.get("b0_T", c.noise_budget.b0_t);
    b.get("temperature_K", c.noise_budget.temperature_k);
  });
  top.get("seed", c.seed);
  top.get("output_dir", c.output_dir);
  top.finish();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["constants"] = {{"boltzmann_k", c.constants.boltzmann_k},
                    {"planck_hbar", c.constants.planck_hbar},
                    {"bohr_magneton", c.constants.bohr_magneton},
                    {"vacuum_permeability", c.constants.vacuum_permeability},
                    {"electron_g_factor", c.constants.electron_g_factor}};
  j["spin_system"] = {{"spin_density_per_m3", c.spin.spin_density},
                      {"volume_m3", c.spin.volume},
                      {"temperature_K", c.spin.temperature},
                      {"g_factor", c.spin.g_factor},
                      {"hwhm_linewidth_T", c.spin.hwhm_linewidth}};
  j["lineshape"] = {{"shape", c.shape == LineShape::lorentzian ? "lorentzian" : "gaussian"}};
  j["resonator"] = {{"center_frequency_Hz", c.resonator.center_frequency},
                    {"quality_factor", c.resonator.quality_factor},
                    {"coupling", c.resonator.coupling},
                    {"coil_diameter_m", c.resonator.coil_diameter},
                    {"equivalent_resistance_ohm", c.resonator.equivalent_resistance},
                    {"filling_factor", c.resonator.filling_factor},
                    {"reference_impedance_ohm", c.resonator.reference_impedance}};
  j["calibration"] = {{"field_slope_mT_per_pct", c.calibration.field_slope},
                      {"field_offset_mT", c.calibration.field_offset},
                      {"freq_slope_GHz_per_pct", c.calibration.freq_slope},
                      {"freq_offset_GHz", c.calibration.freq_offset},
                      {"min_step_pct", c.calibration.min_step},
                      {"max_field_mT", c.calibration.max_field}};
  j["modulation"] = {{"frequency_Hz", c.modulation.frequency},
                     {"amplitude_T", c.modulation.amplitude},
                     {"phase_rad", c.modulation.phase}};
  j["lockin"] = {{"time_constant_s", c.lockin.time_constant},
                 {"reference_phase_rad", c.lockin.reference_phase},
                 {"mixer_phase_rad", c.lockin.mixer_phase},
                 {"track_resonator_phase", c.lockin.track_resonator_phase}};
  json stages = json::array();
  for (const NoiseStage& s : c.ledger.stages) stages.push_back({{"name", s.name}, {"dB", s.degradation_db}});
  j["ledger"] = {{"stages", stages}, {"coupling_efficiency", c.ledger.coupling_efficiency}};
  j["noise"] = {{"enabled", c.noise_enabled}, {"apply_ledger", c.apply_ledger}};
  j["sweep"] = {
      {"mode", to_string(c.sweep.mode)},
      {"excitation",
       {{"start_pct", c.sweep.excitation_start_pct},
        {"stop_pct", c.sweep.excitation_stop_pct},
        {"step_pct", c.sweep.excitation_step_pct}}},
      {"frequency",
       {{"start_GHz", c.sweep.frequency_start_ghz},
        {"stop_GHz", c.sweep.frequency_stop_ghz},
        {"step_GHz", c.sweep.frequency_step_ghz}}},
      {"drive_frequency_GHz", c.sweep.drive_frequency_ghz},
      {"bias_field_mT", c.sweep.bias_field_mt},
      {"dwell_s", c.sweep.dwell_s ? json(*c.sweep.dwell_s) : json(nullptr)},
      {"drive_power_dBm", c.sweep.drive_power_dbm},
      {"samples_per_period", c.sweep.samples_per_period},
      {"decimation", {c.sweep.decimation[0], c.sweep.decimation[1]}},
      {"dc_offsets_V", c.sweep.dc_offsets_v}};
  j["sensitivity"] = {{"fields_T", c.sensitivity.fields_t},
                      {"temperatures_K", c.sensitivity.temperatures_k},
                      {"resistance_ohm", c.sensitivity.resistance_ohm},
                      {"coil_diameter_m", c.sensitivity.coil_diameter_m}};
  j["noise_budget"] = {{"b0_T", c.noise_budget.b0_t}, {"temperature_K", c.noise_budget.temperature_k}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

double RunConfig::dwell_time() const { return sweep.dwell_s ? *sweep.dwell_s : 6.0 * lockin.time_constant; }

double RunConfig::noise_density() const {
  const double johnson = johnson_noise_density(resonator.equivalent_resistance, spin.temperature, constants);
  return apply_ledger ? johnson * std::pow(10.0, ledger.total_db() / 20.0) : johnson;
}

SignalChain RunConfig::signal_chain() const {
  SignalChain chain;
  chain.constants = constants;
  chain.spin = spin;
  chain.shape = shape;
  chain.resonator = resonator;
  chain.modulation = modulation;
  chain.lockin = lockin;
  chain.drive_power = dbm_to_watts(sweep.drive_power_dbm);
  chain.noise.enabled = noise_enabled;
  chain.noise.density = noise_density();
  chain.samples_per_period = sweep.samples_per_period;
  return chain;
}

SweepPlan RunConfig::sweep_plan() const {
  const SweepAxis excitation{AxisKind::excitation, sweep.excitation_start_pct, sweep.excitation_stop_pct,
                             sweep.excitation_step_pct};
  const SweepAxis frequency{AxisKind::frequency, sweep.frequency_start_ghz * 1e9, sweep.frequency_stop_ghz * 1e9,
                            sweep.frequency_step_ghz * 1e9};
  SweepPlan plan;
  switch (sweep.mode) {
    case SweepMode::field: plan.axis1 = excitation.decimated(sweep.decimation[0]); break;
    case SweepMode::frequency: plan.axis1 = frequency.decimated(sweep.decimation[0]); break;
    case SweepMode::grid2d:
      plan.axis1 = excitation.decimated(sweep.decimation[0]);
      plan.axis2 = frequency.decimated(sweep.decimation[1]);
      break;
  }
  plan.dwell_time = dwell_time();
  plan.rng_seed = seed;
  plan.noise_enabled = noise_enabled;
  plan.drive_frequency = sweep.drive_frequency_ghz * 1e9;
  plan.bias_field = sweep.bias_field_mt * 1e-3;
  plan.dc_offsets = sweep.dc_offsets_v;
  return plan;
}

void RunConfig::validate() const {
  checked("constants", [&] { constants.validate(); });
  checked("spin_system", [&] { spin.validate(); });
  checked("resonator", [&] { resonator.validate(); });
  checked("calibration", [&] { calibration.validate(constants); });
  checked("modulation", [&] { modulation.validate(); });
  checked("lockin", [&] { lockin.validate(); });
  checked("ledger", [&] { ledger.validate(); });

  if (sensitivity.fields_t.empty()) throw ConfigError("sensitivity.fields_T: empty field list");
  if (sensitivity.temperatures_k.empty()) throw ConfigError("sensitivity.temperatures_K: empty temperature list");
  for (double b : sensitivity.fields_t)
    if (!(b > 0.0)) throw ConfigError("sensitivity.fields_T: fields must be > 0");
  for (double t : sensitivity.temperatures_k)
    if (!(t > 0.0)) throw ConfigError("sensitivity.temperatures_K: temperatures must be > 0");
  if (!(sensitivity.resistance_ohm > 0.0)) throw ConfigError("sensitivity.resistance_ohm: must be > 0");
  if (!(sensitivity.coil_diameter_m > 0.0)) throw ConfigError("sensitivity.coil_diameter_m: must be > 0");
  if (!(noise_budget.b0_t > 0.0)) throw ConfigError("noise_budget.b0_T: must be > 0");
  if (!(noise_budget.temperature_k > 0.0)) throw ConfigError("noise_budget.temperature_K: must be > 0");

  if (sweep.decimation[0] < 1 || sweep.decimation[1] < 1)
    throw ConfigError("sweep.decimation: factors must be >= 1");
  if (sweep.dwell_s && !(*sweep.dwell_s > 0.0)) throw ConfigError("sweep.dwell_s: must be > 0");
  if (!std::isfinite(sweep.drive_power_dbm)) throw ConfigError("sweep.drive_power_dBm: must be finite");
  checked("sweep", [&] {
    const SignalChain chain = signal_chain();
    sweep_plan().validate(chain, calibration);
  });
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("ESRTWIN_PRESET_DIR")) return env;
  return ESRTWIN_PRESET_DIR;
}

std::string read_preset(const std::string& name) {
  std::filesystem::path p(name);
  if (p.extension() != ".json" && !p.has_parent_path()) p = preset_directory() / (name + ".json");
  if (!std::filesystem::exists(p)) {
    std::string known;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(preset_directory(), ec))
      if (e.path().extension() == ".json") known += " " + e.path().stem().string();
    throw ConfigError("unknown preset \"" + name + "\" (available:" + known + ")");
  }
  return read_file(p);
}

RunConfig load_run_config(const std::optional<std::string>& preset,
                          const std::optional<std::filesystem::path>& config_file) {
  json merged = json::object();
  if (preset) merged = parse_json(read_preset(*preset), "preset " + *preset);
  if (config_file) merged.merge_patch(parse_json(read_file(*config_file), config_file->string()));
  return config_from_json(merged.dump());
}

}  // namespace esrtwin
