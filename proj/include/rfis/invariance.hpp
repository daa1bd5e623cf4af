#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rfis/complex.hpp"
#include "rfis/dynamics.hpp"

namespace rfis {

/// Lattice spacing s_m = 2^-m.
double lattice_spacing(int m);

/// binomial(2^m + n - 1, 2^m): lattice points on an (n-1)-simplex at level m.
long lattice_count(int n, int m);

/// Reference-simplex test lattices M_0 ... M_{m_max}. Row r of level m holds
/// the barycentric weights s_m · (a_0, ..., a_{n-1}) of one lattice point,
/// where the a_i are non-negative integers summing to 2^m. Rows are in
/// descending lexicographic order of (a_0, ..., a_{n-1}).
class TestLattice {
 public:
  static constexpr long kDefaultBudget = 4'000'000;

  /// Throws kCapacityExceeded when the finest level exceeds `budget` rows.
  TestLattice(int n, int m_max, long budget = kDefaultBudget);

  int dimension() const { return n_; }
  int m_max() const { return static_cast<int>(levels_.size()) - 1; }
  const Eigen::MatrixXd& level(int m) const { return levels_.at(m); }
  long count(int m) const { return static_cast<long>(levels_.at(m).rows()); }

 private:
  int n_;
  std::vector<Eigen::MatrixXd> levels_;
};

/// Process-wide cache of lattices keyed by (n, m_max). Throws
/// kCapacityExceeded when level m_max would exceed `budget` rows.
std::shared_ptr<const TestLattice> cached_lattice(
    int n, int m_max, long budget = TestLattice::kDefaultBudget);

/// Test points of `simplex` at level m: M_m · L_Σ (one point per row).
Eigen::MatrixXd map_lattice(const TestLattice& lattice, int m,
                            const BoundaryComplex& c, int simplex);

struct SimplexVerdict {
  /// Fraction of level-m_max test points violating the discretized
  /// boundary condition; 0 when the simplex passed at some level.
  double ntp_ratio = 0.0;
  std::optional<int> passed_at_level;
  /// At most kMaxReportedViolations violating points from level m_max.
  std::vector<Point> violating_points;

  static constexpr int kMaxReportedViolations = 64;
};

/// Discretized boundary-condition test of one simplex. For m = 0..m_max the
/// mapped lattice is checked against ⟨F(x), N⟩ ≤ -r·s_m·ℓ (r = longest edge);
/// the first level with no violation certifies the simplex.
SimplexVerdict bcd_test(const BoundaryComplex& c, int simplex,
                        const SystemModel& sys, const TestLattice& lattice,
                        int m_max, bool collect_violations = false);

/// Σ ntp_ratio over `subset` (all simplices when empty). Simplices are
/// tested concurrently; the sum is taken in index order.
double complex_ntp_sum(const BoundaryComplex& c, const SystemModel& sys,
                       const TestLattice& lattice, int m_max,
                       std::span<const int> subset = {});

/// Single-threaded reference for complex_ntp_sum.
double complex_ntp_sum_serial(const BoundaryComplex& c, const SystemModel& sys,
                              const TestLattice& lattice, int m_max,
                              std::span<const int> subset = {});

/// Per-simplex ntp ratios for `subset`, computed concurrently.
std::vector<double> simplex_ntp_ratios(const BoundaryComplex& c,
                                       const SystemModel& sys,
                                       const TestLattice& lattice, int m_max,
                                       std::span<const int> subset);

/// Verdicts (with violating points) for every simplex, computed concurrently.
std::vector<SimplexVerdict> certify_all(const BoundaryComplex& c,
                                        const SystemModel& sys,
                                        const TestLattice& lattice, int m_max);

/// Largest Jacobian spectral norm over the level-`level` lattice points of
/// every simplex. The certificate only compares f at points of a common
/// simplex, so a pass relies on ℓ being at least this large.
double boundary_jacobian_bound(const BoundaryComplex& c, const SystemModel& sys,
                                   int level = 4);

}  // namespace rfis
