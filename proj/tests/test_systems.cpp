#include <gtest/gtest.h>

#include "rfis/systems.hpp"

using namespace rfis;

namespace {

Point at(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) p(k++) = x;
  return p;
}

}  // namespace

TEST(Registry, AllBuiltinsPresent) {
  for (const char* id : {"vdp", "fitzhugh", "curve_tracking", "reversed_vdp", "phytoplankton",
                         "thomas", "linear_decay", "linear_growth", "rotation"}) {
    const SystemModel sys = benchmark(id);
    EXPECT_EQ(sys.name, id);
    EXPECT_GT(sys.lipschitz, 0.0) << id;
  }
}

TEST(Registry, DriftValues) {
  EXPECT_LT((benchmark("vdp:mu=1").evaluate(at({2, 1})) - at({1, -5})).norm(), 1e-15);
  EXPECT_LT((benchmark("fitzhugh").evaluate(at({0, 0})) - at({0.875, 0.056})).norm(), 1e-15);
  EXPECT_LT((benchmark("reversed_vdp").evaluate(at({1, 2})) - at({-2, 7})).norm(), 1e-15);
  EXPECT_LT((benchmark("phytoplankton").evaluate(at({1, 1, 1})) - at({-0.25, 1, -1.75})).norm(),
            1e-15);
  const Point th = benchmark("thomas:b=0.5").evaluate(at({0, 0, 0}));
  EXPECT_EQ(th.norm(), 0.0);
  EXPECT_LT((benchmark("curve_tracking").evaluate(at({1, 0})) - at({0, 0})).norm(), 1e-15);
  EXPECT_EQ(benchmark("linear_decay:dim=4").dimension, 4);
}

TEST(Registry, NoiseSets) {
  const SystemModel ct = benchmark("curve_tracking:noise=0.2");
  EXPECT_NEAR(ct.noise.support(at({0, 1})), 0.2, 1e-15);
  EXPECT_NEAR(ct.noise.support(at({1, 0})), 0.0, 1e-15);
  const SystemModel rv = benchmark("reversed_vdp");
  EXPECT_NEAR(rv.noise.support(at({1, 1})), 0.06, 1e-15);
  EXPECT_TRUE(benchmark("vdp").noise.is_zero());
}

TEST(Registry, Errors) {
  try {
    benchmark("lorenz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSystem);
  }
  try {
    benchmark("vdp:sigma=2");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "system.sigma");
  }
  EXPECT_THROW(benchmark("vdp:mu"), ValidationError);
  EXPECT_THROW(benchmark("linear_decay:dim=1"), ValidationError);
}

TEST(ParseId, SplitsParams) {
  const auto [name, params] = parse_system_id("thomas:b=0.14");
  EXPECT_EQ(name, "thomas");
  EXPECT_DOUBLE_EQ(params.at("b"), 0.14);
  const auto [n2, p2] = parse_system_id("curve_tracking:rho=1,mu=6.42");
  EXPECT_EQ(p2.size(), 2u);
  EXPECT_TRUE(parse_system_id("vdp").second.empty());
}

TEST(Plugin, RegistersSystem) {
  load_plugin(RFIS_TEST_PLUGIN);
  const SystemModel sys = benchmark("scaled_decay:k=3");
  EXPECT_LT((sys.evaluate(at({1, -2})) - at({-3, 6})).norm(), 1e-15);
  EXPECT_NEAR(sys.lipschitz, 3.6, 1e-6);
}

TEST(Plugin, MissingLibraryIsIoError) {
  try {
    load_plugin("/nonexistent/libnothing.so");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}
