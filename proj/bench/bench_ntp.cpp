// Serial vs OpenMP timings for the certifier sum and the falsifier batch.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "rfis/complex.hpp"
#include "rfis/invariance.hpp"
#include "rfis/polytope.hpp"
#include "rfis/simulation.hpp"
#include "rfis/systems.hpp"

namespace {

double seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial,
              parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  // Thomas system on a subdivided cube: many simplices, most fail early levels.
  rfis::SystemModel thomas = rfis::benchmark("thomas");
  thomas.lipschitz = 1.2;
  const rfis::Point c3 = rfis::Point::Zero(3);
  auto cube = rfis::triangulate_convex_polytope(
      rfis::box_corners(rfis::Point::Constant(3, -10), rfis::Point::Constant(3, 10)), c3);
  cube = rfis::barycentric_subdivision(rfis::barycentric_subdivision(cube));
  const int m_max = 6;
  const auto lattice = rfis::cached_lattice(3, m_max);
  double a = 0, b = 0;
  const double ts = seconds([&] { a = rfis::complex_ntp_sum_serial(cube, thomas, *lattice, m_max); });
  const double tp = seconds([&] { b = rfis::complex_ntp_sum(cube, thomas, *lattice, m_max); });
  report("complex_ntp_sum (432 tris)", ts, tp);
  if (a != b) std::printf("  mismatch: %.17g vs %.17g\n", a, b);

  // Falsifier batch on the contracting linear system.
  rfis::SystemModel decay = rfis::benchmark("linear_decay");
  const auto square = rfis::triangulate_convex_polytope(
      rfis::box_corners(rfis::Point::Constant(2, -2), rfis::Point::Constant(2, 2)),
      rfis::Point::Zero(2));
  rfis::SimulationConfig sim;
  sim.horizon = 10.0;
  sim.seeds = rfis::SeedRule::parse("random:200:7");
  rfis::FalsificationReport rs, rp;
  const double fs = seconds([&] { rs = rfis::falsify_serial(square, decay, sim); });
  const double fp = seconds([&] { rp = rfis::falsify(square, decay, sim); });
  report("falsify (200 trajectories)", fs, fp);
  if (rs.worst_penetration != rp.worst_penetration) std::printf("  falsifier mismatch\n");
  return 0;
}
