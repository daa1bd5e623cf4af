#include "rfis/dynamics.hpp"

#include "rfis/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rfis {

NoiseSet NoiseSet::box(Point lower, Point upper) {
  if (lower.size() != upper.size() || !lower.allFinite() || !upper.allFinite() ||
      (lower.array() > upper.array()).any()) {
    throw Error(ErrorCode::kDegenerateInput,
                "noise box needs finite lower <= upper of equal length");
  }
  return NoiseSet(Box{std::move(lower), std::move(upper)});
}

NoiseSet NoiseSet::polytope(std::vector<Point> vertices) {
  if (vertices.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "noise polytope has no vertices");
  }
  for (const Point& v : vertices) {
    if (!v.allFinite() || v.size() != vertices.front().size()) {
      throw Error(ErrorCode::kDegenerateInput, "bad noise polytope vertex");
    }
  }
  return NoiseSet(VertexPolytope{std::move(vertices)});
}

double NoiseSet::support(const Point& d) const {
  if (const auto* b = std::get_if<Box>(&kind_)) {
    double total = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      total += std::max(b->lower(i) * d(i), b->upper(i) * d(i));
    }
    return total;
  }
  if (const auto* p = std::get_if<VertexPolytope>(&kind_)) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Point& v : p->vertices) best = std::max(best, v.dot(d));
    return best;
  }
  return 0.0;
}

bool NoiseSet::contains(const Point& nu, double tol) const {
  if (const auto* b = std::get_if<Box>(&kind_)) {
    return (nu.array() >= b->lower.array() - tol).all() &&
           (nu.array() <= b->upper.array() + tol).all();
  }
  if (const auto* p = std::get_if<VertexPolytope>(&kind_)) {
    // Support test along the coordinate axes and, for a full-dimensional
    // hull, every facet normal (exact in that case).
    const int n = static_cast<int>(nu.size());
    std::vector<Point> dirs;
    for (int i = 0; i < n; ++i) {
      dirs.push_back(Point::Unit(n, i));
      dirs.push_back(-Point::Unit(n, i));
    }
    Point mean = Point::Zero(n);
    for (const Point& v : p->vertices) mean += v;
    mean /= static_cast<double>(p->vertices.size());
    try {
      const BoundaryComplex hull = triangulate_convex_polytope(p->vertices, mean);
      for (int s = 0; s < hull.num_simplices(); ++s) {
        dirs.push_back(normal_vector(hull, s));
      }
    } catch (const Error&) {
      // Lower-dimensional hull: the axis test is all we do.
    }
    for (const Point& d : dirs) {
      if (nu.dot(d) > support(d) + tol) return false;
    }
    return true;
  }
  return (nu.array().abs() <= tol).all();
}

std::vector<Point> NoiseSet::extreme_points(int dimension) const {
  if (const auto* b = std::get_if<Box>(&kind_)) {
    std::vector<Point> corners;
    for (unsigned mask = 0; mask < (1u << dimension); ++mask) {
      Point p(dimension);
      for (int k = 0; k < dimension; ++k) {
        p(k) = (mask & (1u << k)) ? b->upper(k) : b->lower(k);
      }
      // Degenerate axes collapse corners; keep each distinct point once.
      if (std::none_of(corners.begin(), corners.end(),
                       [&](const Point& q) { return (q - p).norm() == 0.0; })) {
        corners.push_back(std::move(p));
      }
    }
    return corners;
  }
  if (const auto* p = std::get_if<VertexPolytope>(&kind_)) return p->vertices;
  return {Point::Zero(dimension)};
}

Point SystemModel::evaluate(const Point& x) const {
  Point out(dimension);
  drift(std::span<const double>(x.data(), x.size()),
        std::span<double>(out.data(), out.size()));
  if (!out.allFinite()) {
    throw Error(ErrorCode::kNonFiniteDrift, name + " drift is not finite");
  }
  return out;
}

void SystemModel::evaluate_rows(const Eigen::MatrixXd& points,
                                Eigen::MatrixXd& out) const {
  out.resize(points.rows(), dimension);
  Eigen::VectorXd x(dimension), fx(dimension);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    x = points.row(r).transpose();
    drift(std::span<const double>(x.data(), x.size()),
          std::span<double>(fx.data(), fx.size()));
    out.row(r) = fx.transpose();
  }
  if (!out.allFinite()) {
    throw Error(ErrorCode::kNonFiniteDrift, name + " drift is not finite");
  }
}

double worst_case_inner_product(const SystemModel& sys, const Point& x,
                                const Point& normal) {
  return sys.evaluate(x).dot(normal) + sys.noise.support(normal);
}

Eigen::MatrixXd numeric_jacobian(const SystemModel& sys, const Point& x) {
  const int n = sys.dimension;
  Eigen::MatrixXd jac(n, n);
  Point fp(n), fm(n);
  for (int k = 0; k < n; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
    Point xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    sys.drift(std::span<const double>(xp.data(), n), std::span<double>(fp.data(), n));
    sys.drift(std::span<const double>(xm.data(), n), std::span<double>(fm.data(), n));
    jac.col(k) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

double estimate_lipschitz(const SystemModel& sys, const Point& lower,
                          const Point& upper, int points_per_axis) {
  const int n = sys.dimension;
  points_per_axis = std::max(points_per_axis, 20);
  if (!lower.allFinite() || !upper.allFinite()) {
    throw Error(ErrorCode::kDegenerateInput, "Lipschitz box must be bounded");
  }
  long total = 1;
  for (int k = 0; k < n; ++k) total *= points_per_axis;

  double best = 0.0;
  bool finite = true;
#pragma omp parallel for reduction(max : best) reduction(&& : finite) schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    Point x(n);
    long rem = idx;
    for (int k = 0; k < n; ++k) {
      const long i = rem % points_per_axis;
      rem /= points_per_axis;
      x(k) = lower(k) + (upper(k) - lower(k)) * i / (points_per_axis - 1);
    }
    const Eigen::MatrixXd jac = numeric_jacobian(sys, x);
    if (!jac.allFinite()) {
      finite = false;
      continue;
    }
    best = std::max(best, Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues()(0));
  }
  if (!finite) {
    throw Error(ErrorCode::kNonFiniteDrift,
                sys.name + " drift is not finite on the Lipschitz box");
  }
  // A constant field still needs a positive constant.
  return 1.2 * std::max(best, 1e-12);
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySet, "Hausdorff distance of an empty set");
  }
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Point& q : to) nearest = std::min(nearest, (p - q).norm());
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace rfis
