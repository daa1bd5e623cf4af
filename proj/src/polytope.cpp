#include "rfis/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace rfis {
namespace {

using IdSet = std::vector<int>;

// Face lattice of a convex hull, computed lazily and memoized per face.
class HullFaces {
 public:
  HullFaces(const std::vector<Point>& points, double tol)
      : points_(points), tol_(tol) {}

  // Facets of the face spanned by `ids`, which has affine dimension `dim`.
  const std::vector<IdSet>& facets(const IdSet& ids, int dim) {
    auto it = facet_cache_.find(ids);
    if (it != facet_cache_.end()) return it->second;
    return facet_cache_.emplace(ids, compute_facets(ids, dim)).first->second;
  }

  // Pulling triangulation of the face: every simplex has dim + 1 ids and the
  // face's lowest id is the apex of every top-level cone.
  const std::vector<IdSet>& triangulate(const IdSet& ids, int dim) {
    auto it = tri_cache_.find(ids);
    if (it != tri_cache_.end()) return it->second;
    std::vector<IdSet> out;
    if (dim == 0) {
      out.push_back({ids.front()});
    } else {
      const int apex = ids.front();
      const std::vector<IdSet> sub_faces = facets(ids, dim);
      for (const IdSet& g : sub_faces) {
        if (std::find(g.begin(), g.end(), apex) != g.end()) continue;
        for (const IdSet& s : triangulate(g, dim - 1)) {
          IdSet simplex{apex};
          simplex.insert(simplex.end(), s.begin(), s.end());
          out.push_back(std::move(simplex));
        }
      }
    }
    return tri_cache_.emplace(ids, std::move(out)).first->second;
  }

 private:
  std::vector<IdSet> compute_facets(const IdSet& ids, int dim) const {
    const int n = static_cast<int>(points_.front().size());
    const Point& origin = points_[ids.front()];
    Eigen::MatrixXd diffs(n, ids.size());
    for (size_t k = 0; k < ids.size(); ++k) {
      diffs.col(k) = points_[ids[k]] - origin;
    }
    // Orthonormal basis of the face's affine hull.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(dim);
    const Eigen::MatrixXd local = basis.transpose() * diffs;  // dim x |ids|

    std::set<IdSet> found;
    if (dim == 1) {
      const double lo = local.row(0).minCoeff();
      const double hi = local.row(0).maxCoeff();
      IdSet low, high;
      for (size_t k = 0; k < ids.size(); ++k) {
        if (local(0, k) <= lo + tol_) low.push_back(ids[k]);
        if (local(0, k) >= hi - tol_) high.push_back(ids[k]);
      }
      return {low, high};
    }

    const int count = static_cast<int>(ids.size());
    std::vector<int> pick(dim);
    for (int k = 0; k < dim; ++k) pick[k] = k;
    Eigen::MatrixXd rows(dim, dim);
    while (true) {
      for (int k = 0; k < dim; ++k) rows.row(k) = local.col(pick[k]).transpose();
      if (!is_degenerate(rows)) {
        const Point normal = raw_normal(rows).normalized();
        const double offset = normal.dot(rows.row(0).transpose());
        const Eigen::VectorXd side =
            (normal.transpose() * local).transpose().array() - offset;
        if (side.maxCoeff() <= tol_ || side.minCoeff() >= -tol_) {
          IdSet facet;
          for (int k = 0; k < count; ++k) {
            if (std::abs(side(k)) <= tol_) facet.push_back(ids[k]);
          }
          found.insert(std::move(facet));
        }
      }
      int k = dim - 1;
      while (k >= 0 && pick[k] == count - dim + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int l = k + 1; l < dim; ++l) pick[l] = pick[l - 1] + 1;
    }
    return {found.begin(), found.end()};
  }

  const std::vector<Point>& points_;
  double tol_;
  std::map<IdSet, std::vector<IdSet>> facet_cache_;
  std::map<IdSet, std::vector<IdSet>> tri_cache_;
};

}  // namespace

BoundaryComplex triangulate_convex_polytope(const std::vector<Point>& vertices,
                                            const Point& center) {
  const int n = static_cast<int>(center.size());
  if (n < 2 || static_cast<int>(vertices.size()) < n + 1) {
    throw Error(ErrorCode::kDegenerateInput,
                "need at least n+1 points in dimension n >= 2");
  }
  Point lower = vertices.front(), upper = vertices.front();
  for (const Point& v : vertices) {
    if (v.size() != n || !v.allFinite()) {
      throw Error(ErrorCode::kDegenerateInput, "bad vertex coordinates");
    }
    lower = lower.cwiseMin(v);
    upper = upper.cwiseMax(v);
  }
  const double scale = (upper - lower).norm();
  const double tol = 1e-9 * scale;

  Eigen::MatrixXd diffs(n, vertices.size());
  for (size_t k = 0; k < vertices.size(); ++k) {
    diffs.col(k) = vertices[k] - vertices.front();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(1e-10);
  if (lu.rank() < n) {
    throw Error(ErrorCode::kDegenerateInput, "hull is lower-dimensional");
  }

  HullFaces hull(vertices, tol);
  IdSet all(vertices.size());
  for (size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);

  Point interior = Point::Zero(n);
  for (const Point& v : vertices) interior += v;
  interior /= static_cast<double>(vertices.size());

  std::vector<IdSet> simplices;
  for (const IdSet& facet : hull.facets(all, n)) {
    for (IdSet s : hull.triangulate(facet, n - 1)) {
      Eigen::MatrixXd rows(n, n);
      for (int k = 0; k < n; ++k) rows.row(k) = vertices[s[k]];
      Point normal = raw_normal(rows);
      if (normal.dot(rows.row(0).transpose() - interior) < 0.0) {
        std::swap(s[0], s[1]);
        normal = -normal;
      }
      if (normal.normalized().dot(rows.row(0).transpose() - center) <= tol) {
        throw Error(ErrorCode::kCenterOutside,
                    "center is not strictly inside the hull");
      }
      simplices.push_back(std::move(s));
    }
  }

  std::map<int, int> remap;
  for (const IdSet& s : simplices) {
    for (int id : s) remap.emplace(id, 0);
  }
  std::vector<Point> kept;
  for (auto& [old_id, new_id] : remap) {
    new_id = static_cast<int>(kept.size());
    kept.push_back(vertices[old_id]);
  }
  std::vector<OrientedSimplex> oriented;
  oriented.reserve(simplices.size());
  for (const IdSet& s : simplices) {
    OrientedSimplex o;
    for (int id : s) o.vertex_ids.push_back(remap.at(id));
    oriented.push_back(std::move(o));
  }
  return BoundaryComplex(std::move(kept), std::move(oriented), center);
}

std::vector<Point> box_corners(const Point& lower, const Point& upper) {
  const int n = static_cast<int>(lower.size());
  std::vector<Point> corners;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Point p(n);
    for (int k = 0; k < n; ++k) p(k) = (mask & (1u << k)) ? upper(k) : lower(k);
    corners.push_back(std::move(p));
  }
  return corners;
}

std::vector<Point> regular_polygon(const Point& center, double radius, int k) {
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / k;
    Point p(2);
    p << center(0) + radius * std::cos(theta), center(1) + radius * std::sin(theta);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace rfis
