#include "rfis/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace rfis {

double lattice_spacing(int m) { return std::ldexp(1.0, -m); }

long lattice_count(int n, int m) {
  // binomial(K + n - 1, n - 1) with K = 2^m, built incrementally.
  const long k = 1L << m;
  long double result = 1;
  for (long i = 1; i <= n - 1; ++i) result = result * (k + i) / i;
  if (result > 9e18L) return std::numeric_limits<long>::max();
  return std::lround(static_cast<double>(result));
}

TestLattice::TestLattice(int n, int m_max, long budget) : n_(n) {
  if (n < 2 || m_max < 0 || m_max > 30) {
    throw Error(ErrorCode::kDegenerateInput, "lattice needs n >= 2, 0 <= m_max <= 30");
  }
  if (lattice_count(n, m_max) > budget) {
    throw Error(ErrorCode::kCapacityExceeded,
                "level " + std::to_string(m_max) + " lattice has " +
                    std::to_string(lattice_count(n, m_max)) + " points (budget " +
                    std::to_string(budget) + ")");
  }
  for (int m = 0; m <= m_max; ++m) {
    const int total = 1 << m;
    const double s = lattice_spacing(m);
    Eigen::MatrixXd rows(lattice_count(n, m), n);
    std::vector<int> a(n, 0);
    long row = 0;
    // Descending lexicographic enumeration of compositions of `total`.
    auto emit = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == n - 1) {
        a[pos] = remaining;
        for (int k = 0; k < n; ++k) rows(row, k) = s * a[k];
        ++row;
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        a[pos] = v;
        self(self, pos + 1, remaining - v);
      }
    };
    emit(emit, 0, total);
    levels_.push_back(std::move(rows));
  }
}

std::shared_ptr<const TestLattice> cached_lattice(int n, int m_max, long budget) {
  if (n >= 2 && m_max >= 0 && m_max <= 30 && lattice_count(n, m_max) > budget) {
    throw Error(ErrorCode::kCapacityExceeded,
                "level " + std::to_string(m_max) + " lattice has " +
                    std::to_string(lattice_count(n, m_max)) + " points (budget " +
                    std::to_string(budget) + ")");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const TestLattice>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, m_max}];
  if (!slot) slot = std::make_shared<const TestLattice>(n, m_max, std::max(budget, TestLattice::kDefaultBudget));
  return slot;
}

Eigen::MatrixXd map_lattice(const TestLattice& lattice, int m,
                            const BoundaryComplex& c, int simplex) {
  if (lattice.dimension() != c.dimension()) {
    throw Error(ErrorCode::kDegenerateInput, "lattice dimension mismatch");
  }
  const Eigen::MatrixXd rows = c.simplex_matrix(simplex);
  if (is_degenerate(rows)) {
    throw Error(ErrorCode::kDegenerateSimplex, "simplex " + std::to_string(simplex));
  }
  return lattice.level(m) * rows;
}

SimplexVerdict bcd_test(const BoundaryComplex& c, int simplex,
                        const SystemModel& sys, const TestLattice& lattice,
                        int m_max, bool collect_violations) {
  if (m_max > lattice.m_max()) {
    throw Error(ErrorCode::kCapacityExceeded, "lattice built for a smaller m_max");
  }
  const Eigen::MatrixXd rows = c.simplex_matrix(simplex);
  const double r = longest_edge(rows);
  const Point normal = outward_unit_normal(rows, c.center());
  const double noise_term = sys.noise.support(normal);

  SimplexVerdict verdict;
  Eigen::MatrixXd points, drift;
  for (int m = 0; m <= m_max; ++m) {
    points = lattice.level(m) * rows;
    sys.evaluate_rows(points, drift);
    const Eigen::VectorXd inner = (drift * normal).array() + noise_term;
    const double threshold = -r * lattice_spacing(m) * sys.lipschitz;
    long violations = 0;
    for (Eigen::Index k = 0; k < inner.size(); ++k) {
      if (inner(k) > threshold) {
        ++violations;
        if (collect_violations && m == m_max &&
            verdict.violating_points.size() < SimplexVerdict::kMaxReportedViolations) {
          verdict.violating_points.push_back(points.row(k).transpose());
        }
      }
    }
    if (violations == 0) {
      verdict.passed_at_level = m;
      verdict.ntp_ratio = 0.0;
      return verdict;
    }
    verdict.ntp_ratio = static_cast<double>(violations) / inner.size();
  }
  return verdict;
}

std::vector<double> simplex_ntp_ratios(const BoundaryComplex& c,
                                       const SystemModel& sys,
                                       const TestLattice& lattice, int m_max,
                                       std::span<const int> subset) {
  const long count = static_cast<long>(subset.size());
  std::vector<double> ratios(count, 0.0);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    try {
      ratios[k] = bcd_test(c, subset[k], sys, lattice, m_max).ntp_ratio;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return ratios;
}

namespace {

std::vector<int> all_simplices(const BoundaryComplex& c) {
  std::vector<int> ids(c.num_simplices());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

double complex_ntp_sum(const BoundaryComplex& c, const SystemModel& sys,
                       const TestLattice& lattice, int m_max,
                       std::span<const int> subset) {
  std::vector<int> everything;
  if (subset.empty()) {
    everything = all_simplices(c);
    subset = everything;
  }
  const std::vector<double> ratios = simplex_ntp_ratios(c, sys, lattice, m_max, subset);
  return std::accumulate(ratios.begin(), ratios.end(), 0.0);
}

double complex_ntp_sum_serial(const BoundaryComplex& c, const SystemModel& sys,
                              const TestLattice& lattice, int m_max,
                              std::span<const int> subset) {
  std::vector<int> everything;
  if (subset.empty()) {
    everything = all_simplices(c);
    subset = everything;
  }
  double total = 0.0;
  for (int s : subset) total += bcd_test(c, s, sys, lattice, m_max).ntp_ratio;
  return total;
}

std::vector<SimplexVerdict> certify_all(const BoundaryComplex& c,
                                        const SystemModel& sys,
                                        const TestLattice& lattice, int m_max) {
  const int count = c.num_simplices();
  std::vector<SimplexVerdict> verdicts(count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < count; ++s) {
    try {
      verdicts[s] = bcd_test(c, s, sys, lattice, m_max, true);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return verdicts;
}

double boundary_jacobian_bound(const BoundaryComplex& c, const SystemModel& sys,
                                   int level) {
  const TestLattice lattice(c.dimension(), level);
  double best = 0.0;
  bool finite = true;
#pragma omp parallel for reduction(max : best) reduction(&& : finite) schedule(dynamic)
  for (int s = 0; s < c.num_simplices(); ++s) {
    const Eigen::MatrixXd pts = lattice.level(level) * c.simplex_matrix(s);
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      const Eigen::MatrixXd jac = numeric_jacobian(sys, pts.row(r).transpose());
      if (!jac.allFinite()) {
        finite = false;
        continue;
      }
      best = std::max(best, Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues()(0));
    }
  }
  if (!finite) {
    throw Error(ErrorCode::kNonFiniteDrift, sys.name + " drift is not finite on the boundary");
  }
  return best;
}

}  // namespace rfis
