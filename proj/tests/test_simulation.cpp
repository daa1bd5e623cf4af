#include <gtest/gtest.h>

#include <cmath>

#include "rfis/containment.hpp"
#include "rfis/polytope.hpp"
#include "rfis/simulation.hpp"
#include "rfis/systems.hpp"

using namespace rfis;

namespace {

BoundaryComplex square(double h) {
  return triangulate_convex_polytope(box_corners(Point::Constant(2, -h), Point::Constant(2, h)),
                                     Point::Zero(2));
}

double decay_error(double step) {
  const SystemModel sys = benchmark("linear_decay");
  const auto rec = integrate(sys, Point::Constant(2, 1.0), DisturbanceSignal::zero(2), step, 1.0);
  return std::abs(rec.samples.back().x(0) - std::exp(-1.0));
}

}  // namespace

TEST(Rk4, FourthOrderOnDecay) {
  const double coarse = decay_error(0.1), fine = decay_error(0.05);
  EXPECT_LT(coarse, 1e-6);
  EXPECT_GE(coarse / fine, 8.0);
}

TEST(Rk4, RotationKeepsRadius) {
  const SystemModel sys = benchmark("rotation");
  Point x0(2);
  x0 << 1.0, 0.0;
  const auto rec = integrate(sys, x0, DisturbanceSignal::zero(2), 1e-3, 10.0, 100);
  for (const auto& s : rec.samples) EXPECT_NEAR(s.x.norm(), 1.0, 1e-10);
  EXPECT_NEAR(rec.samples.back().t, 10.0, 1e-9);
  EXPECT_NEAR(rec.samples.back().x(0), std::cos(10.0), 1e-9);
  EXPECT_EQ(rec.samples.size(), 101u);
  EXPECT_FALSE(rec.blew_up);
}

TEST(Rk4, ConstantDisturbanceShiftsEquilibrium) {
  const SystemModel sys = benchmark("linear_decay");
  DisturbanceSignal push(DisturbanceSignal::Constant{Point::Constant(2, 0.3)});
  const auto rec = integrate(sys, Point::Zero(2), push, 1e-2, 30.0);
  EXPECT_NEAR(rec.samples.back().x(1), 0.3, 1e-9);
}

TEST(Rk4, FiniteTimeBlowUp) {
  const SystemModel sys{"square", 2, [](auto x, auto out) {
                          out[0] = x[0] * x[0] * x[0];
                          out[1] = 0.0;
                        }};
  const auto rec = integrate(sys, Point::Constant(2, 1.0), DisturbanceSignal::zero(2), 1e-2, 5.0);
  EXPECT_TRUE(rec.blew_up);
  EXPECT_LT(rec.samples.back().t, 1.0);
}

TEST(Rk4, BadStepRejected) {
  EXPECT_THROW(integrate(benchmark("vdp"), Point::Zero(2), DisturbanceSignal::zero(2), 0.0, 1.0),
               ValidationError);
}

TEST(Seeds, ParseRules) {
  EXPECT_EQ(SeedRule::parse("vertices").kind, SeedRule::Kind::kVertices);
  const SeedRule l = SeedRule::parse("lattice:3");
  EXPECT_EQ(l.kind, SeedRule::Kind::kLattice);
  EXPECT_EQ(l.level, 3);
  const SeedRule r = SeedRule::parse("random:100:7");
  EXPECT_EQ(r.count, 100);
  EXPECT_EQ(r.rng_seed, 7u);
  for (const char* bad : {"random:0:1", "lattice:-1", "lattice:x", "grid", "random:5"}) {
    EXPECT_THROW(SeedRule::parse(bad), ValidationError) << bad;
  }
}

TEST(Seeds, PointsLieOnBoundary) {
  const BoundaryComplex sq = square(1.0);
  EXPECT_EQ(seed_points(sq, SeedRule::parse("vertices")).size(), 4u);
  EXPECT_EQ(seed_points(sq, SeedRule::parse("lattice:2")).size(), 16u);  // shared corners once
  const auto random = seed_points(sq, SeedRule::parse("random:200:3"));
  ASSERT_EQ(random.size(), 200u);
  for (const Point& p : random) EXPECT_EQ(containment(p, sq), Location::kOnBoundary);
  EXPECT_EQ(random, seed_points(sq, SeedRule::parse("random:200:3")));
  EXPECT_NE(random, seed_points(sq, SeedRule::parse("random:200:4")));
}

TEST(Falsify, DecayNeverEscapes) {
  SimulationConfig cfg;
  cfg.horizon = 5.0;
  cfg.seeds = SeedRule::parse("random:50:1");
  const auto rep = falsify(square(1.0), benchmark("linear_decay"), cfg);
  EXPECT_EQ(rep.n_trajectories, 50);
  EXPECT_EQ(rep.n_escapes, 0);
  EXPECT_NEAR(rep.penetration_tol, 1e-6 * std::sqrt(8.0), 1e-15);
}

TEST(Falsify, GrowthAlwaysEscapes) {
  SimulationConfig cfg;
  cfg.horizon = 2.0;
  cfg.seeds = SeedRule::parse("vertices");
  const auto rep = falsify(square(1.0), benchmark("linear_growth"), cfg);
  EXPECT_EQ(rep.n_escapes, 4);
  for (const auto& o : rep.outcomes) {
    EXPECT_TRUE(o.escaped);
    EXPECT_GT(o.escape_time, 0.0);
    EXPECT_LT(o.escape_time, 0.01);
  }
}

TEST(Falsify, ParallelMatchesSerial) {
  SimulationConfig cfg;
  cfg.horizon = 3.0;
  cfg.seeds = SeedRule::parse("random:40:2");
  const SystemModel sys = benchmark("reversed_vdp");
  cfg.signals = default_signals(sys);
  const auto c = triangulate_convex_polytope(regular_polygon(Point::Zero(2), 0.5, 8),
                                             Point::Zero(2));
  const auto a = falsify(c, sys, cfg);
  const auto b = falsify_serial(c, sys, cfg);
  EXPECT_EQ(a.n_escapes, b.n_escapes);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (size_t k = 0; k < a.outcomes.size(); ++k) {
    EXPECT_EQ(a.outcomes[k].max_excess, b.outcomes[k].max_excess);
    EXPECT_EQ(a.outcomes[k].escape_time, b.outcomes[k].escape_time);
  }
}

TEST(Falsify, SignalOutsideNoiseRejected) {
  SimulationConfig cfg;
  cfg.signals = parse_signal("const:0.5,0", benchmark("reversed_vdp"));
  EXPECT_THROW(falsify(square(1.0), benchmark("reversed_vdp"), cfg), ValidationError);
}

TEST(Diameter, Square) { EXPECT_NEAR(complex_diameter(square(1.0)), std::sqrt(8.0), 1e-15); }
