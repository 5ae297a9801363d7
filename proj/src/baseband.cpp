#include "esrtwin/baseband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "esrtwin/errors.hpp"

namespace esrtwin {

void ModulationSettings::validate() const {
  if (!(frequency > 0.0)) throw ConfigError("modulation frequency must be > 0");
  if (!(amplitude >= 0.0)) throw ConfigError("modulation amplitude must be >= 0");
}

void LockInSettings::validate() const {
  if (!(time_constant > 0.0)) throw ConfigError("lock-in time constant must be > 0");
}

double SignalChain::drive_amplitude() const {
  return std::sqrt(2.0 * drive_power * resonator.reference_impedance);
}

double SignalChain::resonance_field(double drive_frequency) const {
  return drive_frequency / constants.with_g(spin.g_factor).resonance_hz_per_tesla();
}

LineshapeParams SignalChain::lineshape_at(double bias_field, double drive_frequency) const {
  LineshapeParams p;
  p.center_field = resonance_field(drive_frequency);
  p.hwhm = spin.hwhm_linewidth;
  p.amplitude = peak_susceptibility(curie_magnetization(spin, bias_field, constants),
                                    spin.hwhm_linewidth, constants);
  p.shape = shape;
  return p;
}

void SignalChain::validate() const {
  constants.validate();
  spin.validate();
  resonator.validate();
  modulation.validate();
  lockin.validate();
  if (!(drive_power >= 0.0)) throw ConfigError("drive power must be >= 0");
  if (samples_per_period < 32)
    throw ConfigError("sample rate must be at least 32 samples per modulation period (got " +
                      std::to_string(samples_per_period) + ")");
  if (noise.enabled && !(noise.density >= 0.0)) throw ConfigError("noise density must be >= 0");
}

double settling_guard(const LockInSettings& lockin) { return 5.0 * lockin.time_constant; }

NoiseEngine point_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return NoiseEngine(seq);
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t sample_count(double duration, double sample_rate) {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

// One modulation period of the noise-free envelope.
std::vector<std::complex<double>> envelope_period(const SignalChain& chain, const OperatingPoint& pt) {
  const int spp = chain.samples_per_period;
  const double amp = chain.drive_amplitude();
  const std::complex<double> carrier = reflection_coefficient(pt.drive_frequency, chain.resonator);
  const std::complex<double> gain = perturbation_gain(pt.drive_frequency, chain.resonator);
  const LineshapeParams line = chain.lineshape_at(pt.bias_field, pt.drive_frequency);

  std::vector<std::complex<double>> env(spp);
  for (int k = 0; k < spp; ++k) {
    const double theta = two_pi * k / spp + chain.modulation.phase;
    const double field = pt.bias_field + chain.modulation.amplitude * std::cos(theta);
    env[k] = amp * (carrier + gain * chi_complex(field, line));
  }
  return env;
}

double detection_phase(const SignalChain& chain, double drive_frequency) {
  const double f = chain.lockin.track_resonator_phase ? drive_frequency : chain.resonator.center_frequency;
  // absorption chi = -j chi'' produces dGamma = (-j K) chi''
  return std::arg(std::complex<double>(0.0, -1.0) * perturbation_gain(f, chain.resonator));
}

struct LockInState {
  std::vector<double> cos_ref;
  std::vector<double> sin_ref;
  std::complex<double> mixer;  // e^{-j(detection + mixer phase)}
  double alpha = 0.0;
  std::size_t window_start = 0;
  std::size_t window = 0;
  double yi = 0.0, yq = 0.0, si = 0.0, sq = 0.0;

  LockInState(int spp, double sample_rate, std::size_t n_samples, double detection,
              const LockInSettings& lk)
      : cos_ref(spp), sin_ref(spp), mixer(std::polar(1.0, -(detection + lk.mixer_phase))) {
    for (int k = 0; k < spp; ++k) {
      const double theta = two_pi * k / spp + lk.reference_phase;
      cos_ref[k] = std::numbers::sqrt2 * std::cos(theta);
      sin_ref[k] = -std::numbers::sqrt2 * std::sin(theta);
    }
    alpha = -std::expm1(-1.0 / (sample_rate * lk.time_constant));
    // final tau, rounded down to whole modulation periods
    const auto periods = static_cast<std::size_t>(lk.time_constant * sample_rate / spp);
    window = std::max<std::size_t>(1, periods) * spp;
    window = std::min(window, n_samples);
    window_start = n_samples - window;
  }

  void step(std::complex<double> v, int k, std::size_t n) {
    const double x = mixer.real() * v.real() - mixer.imag() * v.imag();
    yi += alpha * (x * cos_ref[k] - yi);
    yq += alpha * (x * sin_ref[k] - yq);
    if (n >= window_start) {
      si += yi;
      sq += yq;
    }
  }

  LockInOutput result() const {
    const double n = static_cast<double>(window);
    return {si / n, sq / n, yi, yq};
  }
};

void check_record(std::size_t n_samples, double sample_rate, const LockInSettings& lk) {
  if (static_cast<double>(n_samples) + 0.5 < settling_guard(lk) * sample_rate)
    throw ConfigError("record of " + std::to_string(n_samples / sample_rate) +
                      " s is shorter than the 5 tau settling guard (" +
                      std::to_string(settling_guard(lk)) + " s)");
}

}  // namespace

BasebandSeries synthesize_baseband(const SignalChain& chain, const OperatingPoint& point,
                                   double duration, NoiseEngine& rng) {
  chain.validate();
  const double fs = chain.sample_rate();
  const std::size_t n_samples = sample_count(duration, fs);
  check_record(n_samples, fs, chain.lockin);

  BasebandSeries series;
  series.modulation_frequency = chain.modulation.frequency;
  series.samples_per_period = chain.samples_per_period;
  series.detection_phase = detection_phase(chain, point.drive_frequency);
  series.samples.resize(n_samples);

  const auto env = envelope_period(chain, point);
  const int spp = chain.samples_per_period;
  if (chain.noise.enabled && chain.noise.density > 0.0) {
    boost::random::normal_distribution<double> normal(0.0, chain.noise.density * std::sqrt(0.5 * fs));
    int k = 0;
    for (std::size_t n = 0; n < n_samples; ++n) {
      const double re = normal(rng);
      const double im = normal(rng);
      series.samples[n] = env[k] + std::complex<double>(re, im);
      if (++k == spp) k = 0;
    }
  } else {
    int k = 0;
    for (std::size_t n = 0; n < n_samples; ++n) {
      series.samples[n] = env[k];
      if (++k == spp) k = 0;
    }
  }
  return series;
}

LockInOutput lockin_demodulate(const BasebandSeries& series, const LockInSettings& lockin) {
  lockin.validate();
  if (series.samples_per_period < 1) throw ConfigError("series has no modulation period");
  const double fs = series.sample_rate();
  const std::size_t n_samples = series.samples.size();
  check_record(n_samples, fs, lockin);

  LockInState state(series.samples_per_period, fs, n_samples, series.detection_phase, lockin);
  int k = 0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    state.step(series.samples[n], k, n);
    if (++k == series.samples_per_period) k = 0;
  }
  return state.result();
}

LockInOutput acquire_point(const SignalChain& chain, const OperatingPoint& point, double duration,
                           NoiseEngine& rng) {
  chain.validate();
  const double fs = chain.sample_rate();
  const std::size_t n_samples = sample_count(duration, fs);
  check_record(n_samples, fs, chain.lockin);

  const auto env = envelope_period(chain, point);
  const int spp = chain.samples_per_period;
  LockInState state(spp, fs, n_samples, detection_phase(chain, point.drive_frequency), chain.lockin);

  int k = 0;
  if (chain.noise.enabled && chain.noise.density > 0.0) {
    boost::random::normal_distribution<double> normal(0.0, chain.noise.density * std::sqrt(0.5 * fs));
    for (std::size_t n = 0; n < n_samples; ++n) {
      const double re = normal(rng);
      const double im = normal(rng);
      state.step(env[k] + std::complex<double>(re, im), k, n);
      if (++k == spp) k = 0;
    }
  } else {
    for (std::size_t n = 0; n < n_samples; ++n) {
      state.step(env[k], k, n);
      if (++k == spp) k = 0;
    }
  }
  return state.result();
}

}  // namespace esrtwin
