#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rfis/disturbance.hpp"
#include "rfis/systems.hpp"

using namespace rfis;

TEST(Signal, ReversedVdpFormula) {
  const DisturbanceSignal s = reversed_vdp_signal();
  const double pi = std::numbers::pi;
  for (double t : {0.0, 0.37, 1.0, 12.5, 49.9}) {
    const Point nu = s.at(t, 2);
    EXPECT_NEAR(nu(0),
                0.01 * std::sin(2 * t) + 0.005 * std::sin(pi * t) + 0.015 * std::sin(6.53 * t),
                1e-15);
    EXPECT_NEAR(nu(1), -0.01 * std::cos(0.2 * t) + 0.02 * std::sin(5 * pi * t), 1e-15);
  }
}

TEST(Signal, ReversedVdpStaysInNoiseBox) {
  const SystemModel sys = benchmark("reversed_vdp");
  EXPECT_NO_THROW(validate_signal(reversed_vdp_signal(), sys.noise, 2, 50.0));
}

TEST(Signal, CurveTrackingFormula) {
  const DisturbanceSignal s = curve_tracking_signal(0.15);
  for (double t : {0.0, 1.3, 7.7}) {
    const Point nu = s.at(t, 2);
    EXPECT_EQ(nu(0), 0.0);
    EXPECT_NEAR(nu(1), 0.15 * std::sin(t), 1e-15);
  }
  EXPECT_NO_THROW(validate_signal(s, benchmark("curve_tracking").noise, 2, 50.0));
}

TEST(Signal, OutOfSetSignalRejected) {
  const SystemModel sys = benchmark("curve_tracking:noise=0.1");
  try {
    validate_signal(curve_tracking_signal(0.15), sys.noise, 2, 50.0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "signal");
  }
}

TEST(Signal, BatteryCoversExtremePoints) {
  const SystemModel rv = benchmark("reversed_vdp");
  const auto battery = default_signals(rv);
  EXPECT_EQ(battery.size(), 5u);  // four corners plus the explicit signal
  for (const auto& s : battery) EXPECT_NO_THROW(validate_signal(s, rv.noise, 2, 20.0));
  EXPECT_EQ(default_signals(benchmark("vdp")).size(), 1u);  // zero only
}

TEST(Signal, ParseSpecs) {
  const SystemModel rv = benchmark("reversed_vdp");
  const auto c = parse_signal("const:0.01,-0.02", rv);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].at(3.0, 2)(1), -0.02, 1e-15);

  const auto s = parse_signal("sin:0.01/2/0;0.02/1/0.5+0.005/3/0", rv);
  EXPECT_NEAR(s[0].at(1.0, 2)(1), 0.02 * std::sin(1.5) + 0.005 * std::sin(3.0), 1e-15);

  const auto sw = parse_signal("switch:0.5", rv);
  EXPECT_NE(sw[0].at(0.1, 2), sw[0].at(0.6, 2));
  EXPECT_EQ(sw[0].at(0.1, 2), sw[0].at(2.1, 2));  // four vertices, period 0.5

  EXPECT_EQ(parse_signal("zero", rv)[0].at(5.0, 2), Point::Zero(2));
  EXPECT_THROW(parse_signal("const:1", rv), ValidationError);
  EXPECT_THROW(parse_signal("sin:1/2", rv), ValidationError);
  EXPECT_THROW(parse_signal("switch:0", rv), ValidationError);
  EXPECT_THROW(parse_signal("whatever", rv), ValidationError);
}
