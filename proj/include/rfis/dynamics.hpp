#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rfis/complex.hpp"

namespace rfis {

/// Bounded additive disturbance set Ψ.
class NoiseSet {
 public:
  struct Zero {};
  struct Box {
    Point lower, upper;
  };
  struct VertexPolytope {
    std::vector<Point> vertices;
  };

  NoiseSet() = default;
  static NoiseSet zero() { return NoiseSet(Zero{}); }
  static NoiseSet box(Point lower, Point upper);
  static NoiseSet polytope(std::vector<Point> vertices);

  bool is_zero() const { return std::holds_alternative<Zero>(kind_); }
  const auto& kind() const { return kind_; }

  /// sup over ν ∈ Ψ of ⟨ν, direction⟩.
  double support(const Point& direction) const;

  /// Whether ν lies in Ψ (within `tol` per component / in support terms).
  bool contains(const Point& nu, double tol = 1e-12) const;

  /// Extreme points of Ψ: box corners, polytope vertices, or the origin.
  std::vector<Point> extreme_points(int dimension) const;

 private:
  using Kind = std::variant<Zero, Box, VertexPolytope>;
  explicit NoiseSet(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_ = Zero{};
};

inline double support_value(const NoiseSet& noise, const Point& direction) {
  return noise.support(direction);
}

/// Writes f(x) into `out`; must be safe to call concurrently.
using DriftFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// ẋ ∈ F(x) = { f(x) + ν : ν ∈ Ψ } with Lipschitz constant ℓ of F.
struct SystemModel {
  std::string name;
  int dimension = 0;
  DriftFn drift;
  double lipschitz = 0.0;
  NoiseSet noise;

  /// f(x). Throws kNonFiniteDrift when the result has NaN or infinity.
  Point evaluate(const Point& x) const;

  /// f applied to every row of `points`, written row-wise into `out`.
  void evaluate_rows(const Eigen::MatrixXd& points, Eigen::MatrixXd& out) const;
};

/// ⟨F(x), N⟩ = ⟨f(x), N⟩ + h_Ψ(N).
double worst_case_inner_product(const SystemModel& sys, const Point& x,
                                const Point& normal);

/// Central-difference Jacobian of f at x.
Eigen::MatrixXd numeric_jacobian(const SystemModel& sys, const Point& x);

/// 1.2 × the largest spectral norm of a central-difference Jacobian of f
/// over a grid with `points_per_axis` (≥ 20) nodes per axis of [lower, upper].
double estimate_lipschitz(const SystemModel& sys, const Point& lower,
                          const Point& upper, int points_per_axis = 20);

/// Hausdorff distance between two finite point sets. Throws kEmptySet.
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

}  // namespace rfis
