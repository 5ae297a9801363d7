#include "esrtwin/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "esrtwin/errors.hpp"
#include "esrtwin/version.hpp"

namespace esrtwin {

std::size_t SweepAxis::size() const {
  if (!(step > 0.0) || !(stop >= start)) return 0;
  return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

double SweepAxis::value(std::size_t index) const { return start + static_cast<double>(index) * step; }

SweepAxis SweepAxis::decimated(std::size_t k) const {
  if (k <= 1) return *this;
  SweepAxis out = *this;
  out.step = step * static_cast<double>(k);
  out.stop = start + static_cast<double>((size() - 1) / k) * out.step;
  return out;
}

void SweepAxis::validate(const LensCalibration& cal) const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw ConfigError("sweep axis values must be finite");
  if (!(start < stop)) throw ConfigError("sweep axis needs start < stop");
  if (!(step > 0.0)) throw ConfigError("sweep axis step must be > 0");
  if (kind == AxisKind::excitation) {
    if (start < 0.0) throw ConfigError("excitation sweep cannot start below 0 %");
    if (!on_step_grid(start, cal) || !on_step_grid(step, cal))
      throw ConfigError("excitation sweep start/step must be multiples of the " +
                        std::to_string(cal.min_step) + " % lens step");
    try {
      excitation_to_field(value(size() - 1), cal);
    } catch (const RangeError& e) {
      throw ConfigError(e.what());
    }
  } else if (!(start > 0.0)) {
    throw ConfigError("frequency sweep must start above 0 Hz");
  }
}

void SweepPlan::validate(const SignalChain& chain, const LensCalibration& cal) const {
  chain.validate();
  axis1.validate(cal);
  if (axis2) {
    axis2->validate(cal);
    if (axis1.kind != AxisKind::excitation || axis2->kind != AxisKind::frequency)
      throw ConfigError("2D sweeps take excitation rows and frequency columns");
  }
  if (dwell_time + 1e-12 < settling_guard(chain.lockin))
    throw ConfigError("dwell time " + std::to_string(dwell_time) +
                      " s is shorter than the 5 tau settling guard");
  if (!(drive_frequency > 0.0)) throw ConfigError("drive frequency must be > 0");
  if (!(bias_field >= 0.0)) throw ConfigError("bias field must be >= 0");
}

bool SpectrumMetadata::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::vector<double> Spectrum::row_i(std::size_t row) const {
  return {i.begin() + static_cast<std::ptrdiff_t>(row * cols),
          i.begin() + static_cast<std::ptrdiff_t>((row + 1) * cols)};
}

std::vector<double> Spectrum::row_q(std::size_t row) const {
  return {q.begin() + static_cast<std::ptrdiff_t>(row * cols),
          q.begin() + static_cast<std::ptrdiff_t>((row + 1) * cols)};
}

namespace {

double field_at(double excitation_pct, const LensCalibration& cal) {
  return excitation_to_field(quantize_excitation(excitation_pct, cal), cal) * 1e-3;
}

void acquire_all(Spectrum& s, const SweepPlan& plan, const SignalChain& chain, Execution exec) {
  SignalChain c = chain;
  c.noise.enabled = plan.noise_enabled;

  const std::size_t n = s.bias_field.size();
  s.i.assign(n, 0.0);
  s.q.assign(n, 0.0);

  auto measure = [&](std::size_t p) {
    NoiseEngine rng = point_engine(plan.rng_seed, p);
    const OperatingPoint pt{s.drive_frequency[p], s.bias_field[p]};
    const LockInOutput out = exec == Execution::parallel
                                 ? acquire_point(c, pt, plan.dwell_time, rng)
                                 : reference::measure_point(c, pt, plan.dwell_time, rng);
    s.i[p] = out.i;
    s.q[p] = out.q;
  };

  if (exec == Execution::parallel) {
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long p = 0; p < count; ++p) {
      try {
        measure(static_cast<std::size_t>(p));
      } catch (...) {
#pragma omp critical(esrtwin_sweep_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t p = 0; p < n; ++p) measure(p);
  }

  if (!plan.dc_offsets.empty())
    for (std::size_t p = 0; p < n; ++p) s.i[p] += plan.dc_offsets[(p / s.cols) % plan.dc_offsets.size()];
}

Spectrum prepare(const SweepPlan& plan, const SignalChain& chain, std::uint64_t) {
  Spectrum s;
  s.metadata.plan = plan;
  s.metadata.chain = chain;
  s.metadata.seed = plan.rng_seed;
  s.metadata.software_version = software_version;
  if (chain.modulation.overmodulated(chain.spin.hwhm_linewidth)) s.metadata.flags.emplace_back("overmodulation");
  return s;
}

bool inside(double v, double a, double b) { return v >= std::min(a, b) && v <= std::max(a, b); }

}  // namespace

Spectrum run_field_sweep(const SweepPlan& plan, const LensCalibration& cal, const SignalChain& chain,
                         Execution exec) {
  plan.validate(chain, cal);
  if (plan.axis1.kind != AxisKind::excitation || plan.axis2)
    throw ConfigError("field sweep needs a single excitation axis");

  Spectrum s = prepare(plan, chain, plan.rng_seed);
  s.axis1_kind = AxisKind::excitation;
  s.rows = plan.axis1.size();
  s.cols = 1;
  for (std::size_t r = 0; r < s.rows; ++r) {
    const double e = quantize_excitation(plan.axis1.value(r), cal);
    s.axis1.push_back(e);
    s.bias_field.push_back(field_at(e, cal));
    s.drive_frequency.push_back(plan.drive_frequency);
  }
  const double b_res = chain.resonance_field(plan.drive_frequency);
  if (!inside(b_res, s.bias_field.front(), s.bias_field.back()))
    s.metadata.flags.emplace_back("no crossing detected");

  acquire_all(s, plan, chain, exec);
  return s;
}

Spectrum run_frequency_sweep(const SweepPlan& plan, const SignalChain& chain, Execution exec) {
  plan.validate(chain, LensCalibration{});
  if (plan.axis1.kind != AxisKind::frequency || plan.axis2)
    throw ConfigError("frequency sweep needs a single frequency axis");

  Spectrum s = prepare(plan, chain, plan.rng_seed);
  s.axis1_kind = AxisKind::frequency;
  s.rows = plan.axis1.size();
  s.cols = 1;
  for (std::size_t r = 0; r < s.rows; ++r) {
    s.axis1.push_back(plan.axis1.value(r));
    s.bias_field.push_back(plan.bias_field);
    s.drive_frequency.push_back(plan.axis1.value(r));
  }
  const double nu_res = plan.bias_field * chain.constants.with_g(chain.spin.g_factor).resonance_hz_per_tesla();
  if (!inside(nu_res, s.axis1.front(), s.axis1.back())) s.metadata.flags.emplace_back("no crossing detected");

  acquire_all(s, plan, chain, exec);
  return s;
}

Spectrum run_2d_sweep(const SweepPlan& plan, const LensCalibration& cal, const SignalChain& chain,
                      Execution exec) {
  plan.validate(chain, cal);
  if (!plan.axis2) throw ConfigError("2D sweep needs a second (frequency) axis");

  Spectrum s = prepare(plan, chain, plan.rng_seed);
  s.axis1_kind = AxisKind::excitation;
  s.axis2_kind = AxisKind::frequency;
  s.rows = plan.axis1.size();
  s.cols = plan.axis2->size();
  for (std::size_t c = 0; c < s.cols; ++c) s.axis2.push_back(plan.axis2->value(c));

  const double hz_per_t = chain.constants.with_g(chain.spin.g_factor).resonance_hz_per_tesla();
  bool any_crossing = false;
  for (std::size_t r = 0; r < s.rows; ++r) {
    const double e = quantize_excitation(plan.axis1.value(r), cal);
    const double b0 = field_at(e, cal);
    s.axis1.push_back(e);
    any_crossing = any_crossing || inside(b0 * hz_per_t, s.axis2.front(), s.axis2.back());
    for (std::size_t c = 0; c < s.cols; ++c) {
      s.bias_field.push_back(b0);
      s.drive_frequency.push_back(s.axis2[c]);
    }
  }
  if (!any_crossing) s.metadata.flags.emplace_back("no crossing detected");

  acquire_all(s, plan, chain, exec);
  return s;
}

}  // namespace esrtwin
