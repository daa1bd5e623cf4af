#include "rfis/containment.hpp"

#include <optional>

namespace rfis {
namespace {

// Distance along the unit ray `dir` from the center to simplex `s`, if the
// ray pierces it.
std::optional<double> pierce(const BoundaryComplex& c, int s, const Point& dir,
                             double tol) {
  const int n = c.dimension();
  const auto& ids = c.simplex(s).vertex_ids;
  const Point& v0 = c.vertex(ids[0]);
  // Solve v0 + Σ μ_k (v_k - v0) = center + t·dir for (μ, t).
  Eigen::MatrixXd a(n, n);
  for (int k = 1; k < n; ++k) a.col(k - 1) = c.vertex(ids[k]) - v0;
  a.col(n - 1) = -dir;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (std::abs(lu.determinant()) < 1e-300) return std::nullopt;
  const Eigen::VectorXd sol = lu.solve(c.center() - v0);
  const double t = sol(n - 1);
  if (t <= 0.0) return std::nullopt;
  const double mu_sum = sol.head(n - 1).sum();
  if (sol.head(n - 1).minCoeff() < -tol || mu_sum > 1.0 + tol) {
    return std::nullopt;
  }
  return t;
}

}  // namespace

RayHit locate(const Point& x, const BoundaryComplex& c, int hint, double tol) {
  const Point offset = x - c.center();
  const double dist = offset.norm();
  if (dist == 0.0) return {Location::kInside, -1, 0.0, 0.0};
  const Point dir = offset / dist;

  auto classify = [&](int s, double t) {
    const double excess = dist - t;
    const double band = tol * std::max(1.0, t);
    Location loc = Location::kOnBoundary;
    if (excess < -band) loc = Location::kInside;
    if (excess > band) loc = Location::kOutside;
    return RayHit{loc, s, t, excess};
  };

  if (hint >= 0 && hint < c.num_simplices()) {
    if (auto t = pierce(c, hint, dir, tol)) return classify(hint, *t);
  }
  for (int s = 0; s < c.num_simplices(); ++s) {
    if (s == hint) continue;
    if (auto t = pierce(c, s, dir, tol)) return classify(s, *t);
  }
  throw Error(ErrorCode::kNoIntersection,
              "ray from center meets no boundary simplex");
}

}  // namespace rfis
