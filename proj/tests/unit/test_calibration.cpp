#include <doctest.h>

#include <cmath>

#include "esrtwin/calibration.hpp"
#include "esrtwin/errors.hpp"
#include "esrtwin/physics.hpp"

using namespace esrtwin;
using doctest::Approx;

TEST_CASE("excitation to field") {
  const LensCalibration cal;
  CHECK(excitation_to_field(6.4, cal) == Approx(165.444).epsilon(1e-9));
  CHECK(std::abs(excitation_to_field(6.4, cal) - 165.43) <= 0.02);
  CHECK(std::abs(excitation_to_field(6.55, cal) - 168.86) <= 0.02);
  CHECK(excitation_to_field(0.0, cal) == Approx(19.14));
  CHECK_THROWS_AS(excitation_to_field(-0.1, cal), DomainError);
}

TEST_CASE("field ceiling") {
  const LensCalibration cal;
  CHECK_NOTHROW(excitation_to_field(34.0, cal));
  try {
    excitation_to_field(40.0, cal);
    FAIL("expected a range error");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("0 to 0.8") != std::string::npos);
  }
  const LensCalibration standard = LensCalibration::standard_mode();
  CHECK(standard.max_field == 1800.0);
  CHECK_NOTHROW(excitation_to_field(70.0, standard));
  CHECK_THROWS_AS(excitation_to_field(80.0, standard), RangeError);
}

TEST_CASE("field to excitation") {
  const LensCalibration cal;
  CHECK(field_to_excitation(19.14, cal) == 0.0);
  CHECK(field_to_excitation(165.444, cal) == Approx(6.4).epsilon(1e-12));
  CHECK_THROWS_AS(field_to_excitation(10.0, cal), RangeError);
  for (double e = 0.0; e < 30.0; e += 0.731) {
    const double b = excitation_to_field(e, cal);
    CHECK(std::abs(excitation_to_field(field_to_excitation(b, cal), cal) - b) < 1e-9);
    CHECK(field_to_excitation(b, cal) == Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("excitation to frequency") {
  const LensCalibration cal;
  CHECK(excitation_to_frequency(6.498, cal) == Approx(4.695).epsilon(2e-4));
  CHECK(excitation_to_frequency(0.0, cal) == Approx(0.536));
  CHECK(frequency_to_excitation(4.695, cal) == Approx(6.4984375).epsilon(1e-12));
  const PhysicalConstants c;
  for (double e = 6.0; e <= 6.6; e += 0.05) {
    const double f_line = excitation_to_frequency(e, cal) * 1e9;
    const double f_zeeman = resonance_frequency(excitation_to_field(e, cal) * 1e-3, c);
    CHECK(std::abs(f_line / f_zeeman - 1.0) < 0.02);
  }
}

TEST_CASE("implied slope") {
  const LensCalibration cal;
  const PhysicalConstants c;
  CHECK(cal.implied_ghz_per_mt() * 1e12 == Approx(27.997e9).epsilon(1e-4));
  CHECK(std::abs(cal.implied_ghz_per_mt() * 1e12 / c.resonance_hz_per_tesla() - 1.0) < 0.005);
  CHECK_NOTHROW(cal.validate(c));

  LensCalibration off = cal;
  off.freq_slope = 0.70;
  CHECK_THROWS_AS(off.validate(c), ConfigError);
}

TEST_CASE("quantization") {
  const LensCalibration cal;
  const double q = quantize_excitation(6.40005, cal);
  CHECK((q == Approx(6.4).epsilon(1e-12) || q == Approx(6.4001).epsilon(1e-12)));
  CHECK(quantize_excitation(6.4, cal) == 6.4);
  CHECK(quantize_excitation(6.4984, cal) == 6.4984);

  // exact binary ties go to the even multiple
  LensCalibration quarter = cal;
  quarter.min_step = 0.25;
  CHECK(quantize_excitation(0.375, quarter) == 0.5);
  CHECK(quantize_excitation(0.625, quarter) == 0.5);
  CHECK(quantize_excitation(0.875, quarter) == 1.0);

  for (double e = 0.0; e < 10.0; e += 0.0123457) {
    const double a = quantize_excitation(e, cal);
    CHECK(std::abs(a - e) <= 0.5 * cal.min_step + 1e-12);
    CHECK(quantize_excitation(a, cal) == a);
    CHECK(on_step_grid(a, cal));
  }
  CHECK_FALSE(on_step_grid(6.40005, cal));

  const double db = excitation_to_field(6.4001, cal) - excitation_to_field(6.4, cal);
  CHECK(db * 1e3 == Approx(2.286).epsilon(1e-6));
  const double df = excitation_to_frequency(6.4001, cal) - excitation_to_frequency(6.4, cal);
  CHECK(df * 1e6 == Approx(64.0).epsilon(1e-6));
}

TEST_CASE("calibration g factor") {
  const LensCalibration cal;
  const PhysicalConstants c;
  const double g = calibration_g_factor(4.695, cal, c);
  const double field = excitation_to_field(frequency_to_excitation(4.695, cal), cal) * 1e-3;
  CHECK(resonance_frequency(field, c.with_g(g)) == Approx(4.695e9).epsilon(1e-13));
  CHECK(g == Approx(2.00035).epsilon(1e-5));
}
