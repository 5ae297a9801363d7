#include "esrtwin/cli.hpp"

#include <omp.h>

#include <cmath>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "esrtwin/analysis.hpp"
#include "esrtwin/config.hpp"
#include "esrtwin/errors.hpp"
#include "esrtwin/output.hpp"
#include "esrtwin/version.hpp"

namespace esrtwin::cli {

namespace {

struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool no_noise = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file, merged over the preset");
  cmd->add_option("--preset", o.preset, "bundled preset name or path to a preset file");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--no-noise", o.no_noise, "disable receiver noise");
  cmd->add_option("--threads", o.threads, "worker threads for sweeps (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
}

RunConfig resolve(const CommonOptions& o, std::vector<std::string>& flags) {
  std::optional<std::filesystem::path> file;
  if (o.config) file = *o.config;
  RunConfig cfg = load_run_config(o.preset, file);
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.no_noise) {
    cfg.noise_enabled = false;
    flags.emplace_back("no-noise");
  }
  if (o.preset) flags.push_back("preset=" + *o.preset);
  if (o.threads > 0) omp_set_num_threads(o.threads);
  return cfg;
}

int cmd_sensitivity_table(const RunConfig& cfg, const std::vector<std::string>& flags, std::ostream& out) {
  const auto& s = cfg.sensitivity;
  const SensitivityTable t =
      sensitivity_table(s.fields_t, s.temperatures_k, s.resistance_ohm, s.coil_diameter_m, cfg.constants);

  out << "Theoretical spin sensitivity, spins/sqrt(Hz)\n";
  out << fmt::format("{:>10}", "B0 \\ T");
  for (double temp : t.temperatures) out << fmt::format("{:>12}", fmt::format("{:g} K", temp));
  out << "\n";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    out << fmt::format("{:>10}", fmt::format("{:g} T", t.fields[i]));
    for (std::size_t j = 0; j < t.temperatures.size(); ++j) out << fmt::format("{:>12.1e}", t.at(i, j));
    out << "\n";
  }

  const std::filesystem::path dir(cfg.output_dir);
  write_text(dir / "sensitivity_table.csv", sensitivity_csv(t));
  write_text(dir / "sensitivity_table_full.csv", sensitivity_csv(t, true));
  write_text(dir / "sensitivity_table.manifest.json", manifest_json(cfg, "sensitivity-table", flags));
  return ExitCode::ok;
}

void line_summary(const RunConfig& cfg, const Spectrum& s, std::ostream& out) {
  const double hz_per_t = cfg.constants.with_g(cfg.spin.g_factor).resonance_hz_per_tesla();
  try {
    const double crossing = find_zero_crossing(s);
    const double pp = extract_pp_linewidth(s);
    if (s.axis1_kind == AxisKind::excitation) {
      const double pp_t = pp * cfg.calibration.field_slope * 1e-3;
      out << fmt::format("zero crossing: E_obj = {:.5f} %\n", crossing);
      out << fmt::format("pp width: {:.5f} % = {:.2f} uT = {:.3f} MHz\n", pp, pp_t * 1e6, pp_t * hz_per_t * 1e-6);
    } else {
      out << fmt::format("zero crossing: {:.6f} GHz\n", crossing * 1e-9);
      out << fmt::format("pp width: {:.3f} MHz\n", pp * 1e-6);
    }
    // background from the sweep edge farthest from the line
    const double lo = s.axis1.front(), hi = s.axis1.back();
    const double half = 3.0 * pp;
    const AxisWindow signal{std::max(lo, crossing - half), std::min(hi, crossing + half)};
    const double edge = 0.2 * (hi - lo);
    const AxisWindow noise = (crossing - lo > hi - crossing) ? AxisWindow{lo, lo + edge} : AxisWindow{hi - edge, hi};
    try {
      out << fmt::format("SNR (pp / rms): {:.4g}\n", measure_snr(s, signal, noise));
    } catch (const AnalysisError&) {
      out << "SNR: windows do not fit inside the sweep\n";
    }
  } catch (const AnalysisError& e) {
    out << "line: " << e.what() << "\n";
  }
}

void dump_series(const RunConfig& cfg, const Spectrum& s, std::size_t index, const std::filesystem::path& p) {
  if (index >= s.size()) throw ConfigError("--dump-point " + std::to_string(index) + " is outside the sweep");
  SignalChain chain = cfg.signal_chain();
  chain.noise.enabled = cfg.noise_enabled;
  NoiseEngine rng = point_engine(cfg.seed, index);
  const BasebandSeries series =
      synthesize_baseband(chain, {s.drive_frequency[index], s.bias_field[index]}, cfg.dwell_time(), rng);
  std::string csv = "t_s,re_V,im_V\n";
  const double dt = 1.0 / series.sample_rate();
  for (std::size_t n = 0; n < series.samples.size(); ++n)
    csv += fmt::format("{:.9e},{:.10e},{:.10e}\n", n * dt, series.samples[n].real(), series.samples[n].imag());
  write_text(p, csv);
}

int cmd_sweep(RunConfig cfg, const std::optional<std::string>& mode, bool serial,
              std::optional<std::size_t> dump_point, std::vector<std::string> flags, std::ostream& out) {
  if (mode) cfg.sweep.mode = parse_sweep_mode(*mode);
  cfg.validate();
  const SignalChain chain = cfg.signal_chain();
  const SweepPlan plan = cfg.sweep_plan();
  const Execution exec = serial ? Execution::serial_reference : Execution::parallel;
  if (serial) flags.emplace_back("serial-reference");

  Spectrum s;
  switch (cfg.sweep.mode) {
    case SweepMode::field: s = run_field_sweep(plan, cfg.calibration, chain, exec); break;
    case SweepMode::frequency: s = run_frequency_sweep(plan, chain, exec); break;
    case SweepMode::grid2d: s = run_2d_sweep(plan, cfg.calibration, chain, exec); break;
  }
  for (const std::string& f : s.metadata.flags) flags.push_back(f);

  const std::string name = "sweep_" + to_string(cfg.sweep.mode);
  const std::filesystem::path dir(cfg.output_dir);
  write_text(dir / (name + ".csv"), sweep_csv(s));
  write_text(dir / (name + ".manifest.json"), manifest_json(cfg, "sweep --mode " + to_string(cfg.sweep.mode), flags));
  if (s.axis2_kind) write_text(dir / (name + "_I_matrix.csv"), matrix_csv(s));
  if (dump_point) dump_series(cfg, s, *dump_point, dir / fmt::format("{}_series_{}.csv", name, *dump_point));

  out << fmt::format("{} sweep: {} x {} points, tau = {:g} s, dwell = {:g} s, seed {}\n", to_string(cfg.sweep.mode),
                     s.rows, s.cols, cfg.lockin.time_constant, plan.dwell_time, cfg.seed);
  for (const std::string& f : s.metadata.flags) out << "flag: " << f << "\n";

  if (s.axis2_kind) {
    const double hz_per_t = cfg.constants.with_g(cfg.spin.g_factor).resonance_hz_per_tesla();
    try {
      const LocusFit fit = fit_crossing_locus(s, cfg.modulation.amplitude * hz_per_t);
      out << fmt::format("crossing locus: nu = {:.5f} GHz/% * E_obj + {:.5f} GHz ({} rows, rms {:.3f} MHz)\n",
                         fit.slope * 1e-9, fit.intercept * 1e-9, fit.row_axis1.size(), fit.rms_residual * 1e-6);
    } catch (const AnalysisError& e) {
      out << "crossing locus: " << e.what() << "\n";
    }
  } else {
    line_summary(cfg, s, out);
  }
  out << "wrote " << (dir / (name + ".csv")).string() << "\n";
  return ExitCode::ok;
}

int cmd_noise_budget(const RunConfig& cfg, const std::vector<std::string>& flags, std::ostream& out) {
  const auto& p = cfg.noise_budget;
  const double theoretical = spin_sensitivity(p.b0_t, p.temperature_k, cfg.sensitivity.resistance_ohm,
                                              cfg.sensitivity.coil_diameter_m, cfg.constants);
  out << fmt::format("theoretical N_min at {:g} T, {:g} K: {:.3e} spins/sqrt(Hz)\n", p.b0_t, p.temperature_k,
                     theoretical);

  std::string csv = "stage,dB,cumulative_dB,N_min\n";
  csv += fmt::format("theoretical,0,0,{:.6e}\n", theoretical);
  double cumulative = 0.0;
  for (const NoiseStage& s : cfg.ledger.stages) {
    cumulative += s.degradation_db;
    const double n = theoretical * std::pow(10.0, cumulative / 20.0);
    out << fmt::format("  {:<24} {:>6.2f} dB  cumulative {:>6.2f} dB  N_min {:.3e}\n", s.name, s.degradation_db,
                       cumulative, n);
    csv += fmt::format("{},{:g},{:g},{:.6e}\n", s.name, s.degradation_db, cumulative, n);
  }
  const double degraded = apply_ledger(theoretical, cfg.ledger);
  out << fmt::format("total {:.2f} dB, coupling efficiency {:g}\n", cfg.ledger.total_db(),
                     cfg.ledger.coupling_efficiency);
  out << fmt::format("degraded N_min: {:.3e} spins/sqrt(Hz)\n", degraded);
  csv += fmt::format("degraded,{:g},{:g},{:.6e}\n", cfg.ledger.total_db(), cfg.ledger.total_db(), degraded);

  const std::filesystem::path dir(cfg.output_dir);
  write_text(dir / "noise_budget.csv", csv);
  write_text(dir / "noise_budget.manifest.json", manifest_json(cfg, "noise-budget", flags));
  return ExitCode::ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digital twin of an in-microscope CW ESR spectrometer", "esrtwin"};
  app.set_version_flag("--version", std::string(software_name) + " " + software_version);
  app.require_subcommand(1);

  CommonOptions table_opts, sweep_opts, budget_opts;
  auto* table = app.add_subcommand("sensitivity-table", "theoretical spin sensitivity over a B0 x T grid");
  add_common(table, table_opts);

  auto* sweep = app.add_subcommand("sweep", "simulated field, frequency or 2D sweep");
  add_common(sweep, sweep_opts);
  std::optional<std::string> mode;
  bool serial = false;
  sweep->add_option("--mode", mode, "field, frequency or 2d (overrides the config)")
      ->check(CLI::IsMember({"field", "frequency", "2d"}));
  sweep->add_flag("--serial", serial, "use the serial reference implementation");
  std::optional<std::size_t> dump_point;
  sweep->add_option("--dump-point", dump_point, "also write the raw baseband series of this point index");

  auto* budget = app.add_subcommand("noise-budget", "theoretical and ledger-degraded sensitivity");
  add_common(budget, budget_opts);

  std::vector<const char*> argv{"esrtwin"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::config_error;
  }

  try {
    std::vector<std::string> flags;
    if (table->parsed()) {
      RunConfig cfg = resolve(table_opts, flags);
      cfg.validate();
      return cmd_sensitivity_table(cfg, flags, out);
    }
    if (sweep->parsed()) return cmd_sweep(resolve(sweep_opts, flags), mode, serial, dump_point, flags, out);
    RunConfig cfg = resolve(budget_opts, flags);
    cfg.validate();
    return cmd_noise_budget(cfg, flags, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const RangeError& e) {
    err << "config error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::runtime_error;
  }
}

}  // namespace esrtwin::cli
