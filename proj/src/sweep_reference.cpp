#include "esrtwin/sweep.hpp"

namespace esrtwin::reference {

LockInOutput measure_point(const SignalChain& chain, const OperatingPoint& point, double duration,
                           NoiseEngine& rng) {
  const BasebandSeries series = synthesize_baseband(chain, point, duration, rng);
  return lockin_demodulate(series, chain.lockin);
}

}  // namespace esrtwin::reference
