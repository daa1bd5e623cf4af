#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfis/complex.hpp"
#include "rfis/disturbance.hpp"
#include "rfis/dynamics.hpp"

namespace rfis {

struct TrajectorySample {
  double t;
  Point x;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  bool blew_up = false;  ///< state became non-finite before the horizon
};

/// Fixed-step RK4 for ẋ = f(x) + ν(t). Every `record_stride`-th state is
/// stored, plus the first and last.
TrajectoryRecord integrate(const SystemModel& sys, const Point& seed,
                           const DisturbanceSignal& signal, double step,
                           double horizon, int record_stride = 1);

/// Seed-point selection on the boundary complex.
///   vertices           every vertex
///   lattice:m          level-m lattice points of every simplex, deduplicated
///   random:k:seed      k area-weighted uniform points (mt19937_64 seeded)
///   explicit           the points given in `explicit_points`
struct SeedRule {
  enum class Kind { kVertices, kLattice, kRandom, kExplicit };
  Kind kind = Kind::kVertices;
  int level = 0;
  long count = 0;
  std::uint64_t rng_seed = 0;
  std::vector<Point> explicit_points;

  static SeedRule parse(std::string_view spec);
};

std::vector<Point> seed_points(const BoundaryComplex& c, const SeedRule& rule);

struct SimulationConfig {
  double step = 1e-3;
  double horizon = 50.0;
  /// Escape threshold on radial excess; negative means 1e-6 × diameter.
  double penetration_tol = -1.0;
  std::vector<DisturbanceSignal> signals;
  SeedRule seeds;
};

struct TrajectoryOutcome {
  int seed_index = 0;
  int signal_index = 0;
  bool escaped = false;
  bool blew_up = false;
  double escape_time = -1.0;
  double max_excess = 0.0;  ///< largest radial excess seen (≤ 0 when inside)
};

struct FalsificationReport {
  long n_trajectories = 0;
  long n_escapes = 0;
  long n_blowups = 0;
  double worst_penetration = 0.0;
  double penetration_tol = 0.0;
  std::vector<TrajectoryOutcome> outcomes;
};

/// Largest vertex-to-vertex distance of `c`.
double complex_diameter(const BoundaryComplex& c);

/// Simulates every (seed, signal) pair and records boundary crossings.
/// Pairs run concurrently.
FalsificationReport falsify(const BoundaryComplex& c, const SystemModel& sys,
                            const SimulationConfig& cfg);

/// Single-threaded reference for falsify.
FalsificationReport falsify_serial(const BoundaryComplex& c, const SystemModel& sys,
                                   const SimulationConfig& cfg);

}  // namespace rfis
