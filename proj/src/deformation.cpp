#include "rfis/deformation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace rfis {
namespace {

// The floor applies relative to the simplex scale and also absolutely, so a
// set contracting onto a point stops before its coordinates underflow.
bool star_degenerate(const BoundaryComplex& c, int j, double floor) {
  for (int s : c.star(j)) {
    const Eigen::MatrixXd rows = c.simplex_matrix(s);
    const double scale = std::pow(longest_edge(rows), c.dimension() - 1);
    const double size = raw_normal(rows).norm();
    if (!(size >= floor * scale) || !(size >= floor)) return true;
  }
  return false;
}

std::vector<int> to_vector(std::span<const int> ids) { return {ids.begin(), ids.end()}; }

void check_budget(const BoundaryComplex& c, const DeformationConfig& cfg) {
  if (c.num_simplices() > cfg.max_simplices) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::to_string(c.num_simplices()) + " simplices exceed the cap of " +
                    std::to_string(cfg.max_simplices));
  }
}

long projected_children(const BoundaryComplex& c, SubdivisionKind kind) {
  long factor = 1;
  if (kind == SubdivisionKind::kBarycentric) {
    for (int k = 2; k <= c.dimension(); ++k) factor *= k;
  } else {
    factor = c.dimension();
  }
  return factor * c.num_simplices();
}

}  // namespace

Point mapped_position(const Point& v, double alpha, const Point& center) {
  return (1.0 - alpha) * center + alpha * v;
}

BoundaryComplex vertex_map(const BoundaryComplex& c, int j, double alpha,
                           const Point& center, double degeneracy_floor) {
  if (j < 0 || j >= c.num_vertices()) {
    throw Error(ErrorCode::kUnknownVertex, std::to_string(j));
  }
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "alpha must be positive");
  }
  BoundaryComplex out = c;
  out.set_vertex(j, mapped_position(c.vertex(j), alpha, center));
  if (star_degenerate(out, j, degeneracy_floor)) {
    throw Error(ErrorCode::kDegenerateSimplex,
                "vertex map collapses the star of vertex " + std::to_string(j));
  }
  return out;
}

Decision keep_or_discard(const BoundaryComplex& before,
                         const BoundaryComplex& after, int j,
                         const SystemModel& sys, const TestLattice& lattice,
                         int m_max) {
  try {
    const std::vector<int> star_before = to_vector(before.star(j));
    const std::vector<int> star_after = to_vector(after.star(j));
    const double ntp_before = complex_ntp_sum(before, sys, lattice, m_max, star_before);
    const double ntp_after = complex_ntp_sum(after, sys, lattice, m_max, star_after);
    return stop_condition(ntp_before, ntp_after) ? Decision::kKeep : Decision::kDiscard;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateSimplex) return Decision::kDiscard;
    throw;
  }
}

bool volume_delta_check(const BoundaryComplex& before,
                        const BoundaryComplex& after, int j, double alpha) {
  const double v_before = enclosed_volume(before);
  const double v_after = enclosed_volume(after);
  const double expected = v_before - (1.0 - alpha) * star_cone_volume(before, j);
  return std::abs(v_after - expected) <= 1e-9 * std::max(std::abs(expected), v_before);
}

RunSequence run(const SystemModel& sys, const BoundaryComplex& initial,
                const DeformationConfig& cfg, const RunHooks& hooks) {
  using Clock = std::chrono::steady_clock;
  if (!(cfg.alpha > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "alpha must be positive");
  }
  if (cfg.center.size() != initial.dimension() ||
      (cfg.center - initial.center()).norm() > 0.0) {
    throw Error(ErrorCode::kDegenerateInput,
                "deformation center must equal the complex center");
  }
  if (sys.dimension != initial.dimension()) {
    throw Error(ErrorCode::kDegenerateInput, "system and complex dimensions differ");
  }
  check_budget(initial, cfg);

  const auto lattice = cached_lattice(initial.dimension(), cfg.m_max, cfg.lattice_budget);
  RunSequence seq;
  seq.complexes.push_back(initial);
  seq.records.push_back({0, 0.0, enclosed_volume(initial),
                         complex_ntp_sum(initial, sys, *lattice, cfg.m_max), 0, 0});
  if (hooks.on_iteration) hooks.on_iteration(seq.records.back(), seq.complexes.back());

  BoundaryComplex current = initial;
  for (int t = 1; t <= cfg.t_max; ++t) {
    const auto start = Clock::now();
    if (t > 1) {
      if (projected_children(current, cfg.subdivision) > cfg.max_simplices) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "subdivision at iteration " + std::to_string(t) +
                        " would exceed the simplex cap of " +
                        std::to_string(cfg.max_simplices));
      }
      current = cfg.subdivision == SubdivisionKind::kBarycentric
                    ? barycentric_subdivision(current)
                    : centroidal_subdivision(current);
    }

    // Per-simplex NTP of the current complex; NaN marks "not yet computed".
    // Only the star of a kept vertex changes, so entries stay exact.
    const double unknown = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> ntp(current.num_simplices(), unknown);
    auto star_sum = [&](int j) {
      std::vector<int> missing;
      for (int s : current.star(j)) {
        if (std::isnan(ntp[s])) missing.push_back(s);
      }
      const std::vector<double> fresh =
          simplex_ntp_ratios(current, sys, *lattice, cfg.m_max, missing);
      for (size_t k = 0; k < missing.size(); ++k) ntp[missing[k]] = fresh[k];
      double total = 0.0;
      for (int s : current.star(j)) total += ntp[s];
      return total;
    };

    const int vertex_count = current.num_vertices();
    std::vector<char> status(vertex_count, 1);
    long sweeps = 0, kept = 0;
    bool any_active = true;
    while (any_active) {
      if (++sweeps > cfg.max_sweeps) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "sweep fuse tripped at iteration " + std::to_string(t));
      }
      for (int j = 0; j < vertex_count; ++j) {
        const double before = star_sum(j);
        const Point old_position = current.vertex(j);
        current.set_vertex(j, mapped_position(old_position, cfg.alpha, cfg.center));
        if (star_degenerate(current, j, cfg.degeneracy_floor)) {
          current.set_vertex(j, old_position);
          status[j] = 0;
          continue;
        }
        const std::vector<int> star = to_vector(current.star(j));
        std::vector<double> after_ratios;
        try {
          after_ratios = simplex_ntp_ratios(current, sys, *lattice, cfg.m_max, star);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerateSimplex) throw;
          current.set_vertex(j, old_position);
          status[j] = 0;
          continue;
        }
        double after = 0.0;
        for (double r : after_ratios) after += r;
        if (stop_condition(before, after)) {
          for (size_t k = 0; k < star.size(); ++k) ntp[star[k]] = after_ratios[k];
          status[j] = 1;
          ++kept;
          if (hooks.on_keep) {
            const Point moved = current.vertex(j);
            current.set_vertex(j, old_position);
            const double v_before = enclosed_volume(current);
            current.set_vertex(j, moved);
            hooks.on_keep(t, j, before, after, v_before, enclosed_volume(current));
          }
        } else {
          current.set_vertex(j, old_position);
          status[j] = 0;
        }
      }
      any_active = false;
      for (char s : status) any_active = any_active || s;
    }

    double total = 0.0;
    for (int s = 0; s < current.num_simplices(); ++s) {
      if (std::isnan(ntp[s])) {
        total += bcd_test(current, s, sys, *lattice, cfg.m_max).ntp_ratio;
      } else {
        total += ntp[s];
      }
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    seq.complexes.push_back(current);
    seq.records.push_back({t, elapsed, enclosed_volume(current), total, sweeps, kept});
    if (hooks.on_iteration) hooks.on_iteration(seq.records.back(), seq.complexes.back());
  }

  const double final_ntp =
      complex_ntp_sum(seq.complexes.back(), sys, *lattice, cfg.m_max);
  seq.rfis_found = final_ntp == 0.0;
  seq.summary = seq.rfis_found ? "RFIS found"
                               : "RFIS Not Found (total NTP " +
                                     std::to_string(final_ntp) + ")";
  return seq;
}

}  // namespace rfis
