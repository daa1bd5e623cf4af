#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rfis/complex.hpp"
#include "rfis/dynamics.hpp"
#include "rfis/invariance.hpp"

namespace rfis {

enum class SubdivisionKind { kBarycentric, kCentroidal };

struct DeformationConfig {
  double alpha = 0.98;  ///< growth (> 1) or decay (< 1) factor of a vertex map
  Point center;         ///< ray origin; must equal the initial complex's center
  int m_max = 8;
  int t_max = 6;
  SubdivisionKind subdivision = SubdivisionKind::kBarycentric;
  double degeneracy_floor = 1e-12;
  long max_simplices = 100'000;
  long lattice_budget = TestLattice::kDefaultBudget;
  /// Safety fuse on full vertex sweeps within one iteration.
  long max_sweeps = 10'000;
};

struct IterationRecord {
  int iteration = 0;
  double wall_time_s = 0.0;
  double volume = 0.0;
  double total_ntp = 0.0;
  long sweeps = 0;
  long kept_maps = 0;
};

struct RunSequence {
  std::vector<BoundaryComplex> complexes;  ///< I[0] ... I[t_max]
  std::vector<IterationRecord> records;
  bool rfis_found = false;
  std::string summary;
};

/// Position of `v` after one vertex map: (1 - α)·center + α·v.
Point mapped_position(const Point& v, double alpha, const Point& center);

/// Copy of `c` with vertex j moved by the vertex map. Throws
/// kDegenerateSimplex if a simplex of its closed star collapses.
BoundaryComplex vertex_map(const BoundaryComplex& c, int j, double alpha,
                           const Point& center, double degeneracy_floor = 1e-12);

/// Keep when the star-restricted NTP sum strictly decreases or reaches 0.
inline bool stop_condition(double ntp_before, double ntp_after) {
  return ntp_after < ntp_before || ntp_after == 0.0;
}

enum class Decision { kKeep, kDiscard };

/// Evaluates the stop condition over the closed star of j in `before` and
/// `after` (same connectivity, vertex j moved).
Decision keep_or_discard(const BoundaryComplex& before,
                         const BoundaryComplex& after, int j,
                         const SystemModel& sys, const TestLattice& lattice,
                         int m_max);

/// Checks the per-cone scaling law: the enclosed volume changes by exactly
/// -(1 - α) times the star's cone volume (relative tolerance 1e-9).
bool volume_delta_check(const BoundaryComplex& before,
                        const BoundaryComplex& after, int j, double alpha);

/// Observer invoked when a vertex map is kept (for instrumentation).
struct RunHooks {
  std::function<void(int iteration, int vertex, double ntp_before,
                     double ntp_after, double volume_before,
                     double volume_after)>
      on_keep;
  std::function<void(const IterationRecord&, const BoundaryComplex&)> on_iteration;
};

/// Repeated vertex-map sweeps with subdivision between iterations. Throws
/// kBudgetExceeded when the simplex cap or the sweep fuse is hit.
RunSequence run(const SystemModel& sys, const BoundaryComplex& initial,
                const DeformationConfig& cfg, const RunHooks& hooks = {});

}  // namespace rfis
