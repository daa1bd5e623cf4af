#include "rfis/complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace rfis {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::kNotInSimplex: return "NotInSimplex";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kCenterOutside: return "CenterOutside";
    case ErrorCode::kNoIntersection: return "NoIntersection";
    case ErrorCode::kNonFiniteDrift: return "NonFiniteDrift";
    case ErrorCode::kUnknownSystem: return "UnknownSystem";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

BoundaryComplex::BoundaryComplex(std::vector<Point> vertices,
                                 std::vector<OrientedSimplex> simplices,
                                 Point center)
    : vertices_(std::move(vertices)),
      simplices_(std::move(simplices)),
      center_(std::move(center)) {
  const int n = dimension();
  if (n < 2) {
    throw Error(ErrorCode::kDegenerateInput, "ambient dimension must be >= 2");
  }
  for (const Point& v : vertices_) {
    if (v.size() != n || !v.allFinite()) {
      throw Error(ErrorCode::kDegenerateInput,
                  "vertex has wrong dimension or non-finite entries");
    }
  }
  star_index_.assign(vertices_.size(), {});
  for (int s = 0; s < num_simplices(); ++s) {
    const auto& ids = simplices_[s].vertex_ids;
    if (static_cast<int>(ids.size()) != n) {
      throw Error(ErrorCode::kDegenerateInput,
                  "simplex " + std::to_string(s) + " needs " +
                      std::to_string(n) + " vertices");
    }
    for (int k = 0; k < n; ++k) {
      if (ids[k] < 0 || ids[k] >= num_vertices()) {
        throw Error(ErrorCode::kUnknownVertex,
                    "simplex " + std::to_string(s) + " references vertex " +
                        std::to_string(ids[k]));
      }
      for (int l = 0; l < k; ++l) {
        if (ids[l] == ids[k]) {
          throw Error(ErrorCode::kDegenerateInput,
                      "simplex " + std::to_string(s) + " repeats a vertex");
        }
      }
      star_index_[ids[k]].push_back(s);
    }
  }
}

Eigen::MatrixXd BoundaryComplex::simplex_matrix(int s) const {
  const auto& ids = simplices_[s].vertex_ids;
  Eigen::MatrixXd rows(ids.size(), dimension());
  for (size_t k = 0; k < ids.size(); ++k) rows.row(k) = vertices_[ids[k]];
  return rows;
}

void BoundaryComplex::validate() const {
  const int n = dimension();
  std::map<std::vector<int>, int> ridge_count;
  for (const auto& s : simplices_) {
    for (int skip = 0; skip < n; ++skip) {
      std::vector<int> ridge;
      for (int k = 0; k < n; ++k) {
        if (k != skip) ridge.push_back(s.vertex_ids[k]);
      }
      std::sort(ridge.begin(), ridge.end());
      ++ridge_count[ridge];
    }
  }
  for (const auto& [ridge, count] : ridge_count) {
    if (count != 2) {
      throw Error(ErrorCode::kDegenerateInput,
                  "ridge shared by " + std::to_string(count) +
                      " simplices (expected 2)");
    }
  }
  for (int s = 0; s < num_simplices(); ++s) {
    const Eigen::MatrixXd rows = simplex_matrix(s);
    if (is_degenerate(rows)) {
      throw Error(ErrorCode::kDegenerateSimplex,
                  "simplex " + std::to_string(s));
    }
    const Point centroid = rows.colwise().mean().transpose();
    if (raw_normal(rows).dot(centroid - center_) <= 0.0) {
      throw Error(ErrorCode::kDegenerateInput,
                  "simplex " + std::to_string(s) + " is not oriented outward");
    }
  }
  std::vector<Point> dirs;
  dirs.reserve(vertices_.size());
  for (const Point& v : vertices_) {
    const double len = (v - center_).norm();
    if (len == 0.0) {
      throw Error(ErrorCode::kDegenerateInput, "vertex coincides with center");
    }
    dirs.push_back((v - center_) / len);
  }
  for (size_t i = 0; i < dirs.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if ((dirs[i] - dirs[j]).norm() < 1e-12) {
        throw Error(ErrorCode::kDegenerateInput,
                    "vertices " + std::to_string(j) + " and " +
                        std::to_string(i) + " share a ray from the center");
      }
    }
  }
}

Point raw_normal(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.cols());
  // B has the edge vectors v_k - v_0 as columns.
  Eigen::MatrixXd b(n, n - 1);
  for (int k = 1; k < n; ++k) {
    b.col(k - 1) = (rows.row(k) - rows.row(0)).transpose();
  }
  Point normal(n);
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int r = 0, out = 0; r < n; ++r) {
      if (r != i) minor.row(out++) = b.row(r);
    }
    // (-1)^(n+i) with 1-based i.
    const double sign = ((n + i + 1) % 2 == 0) ? 1.0 : -1.0;
    normal(i) = sign * minor.determinant();
  }
  return normal;
}

double longest_edge(const Eigen::MatrixXd& rows) {
  double r = 0.0;
  for (int i = 0; i < rows.rows(); ++i) {
    for (int j = 0; j < i; ++j) {
      r = std::max(r, (rows.row(i) - rows.row(j)).norm());
    }
  }
  return r;
}

bool is_degenerate(const Eigen::MatrixXd& rows) {
  const double scale = std::pow(longest_edge(rows), rows.cols() - 1);
  return !(raw_normal(rows).norm() >= 1e-12 * scale) || scale == 0.0;
}

Point outward_unit_normal(const Eigen::MatrixXd& rows, const Point& center) {
  if (is_degenerate(rows)) {
    throw Error(ErrorCode::kDegenerateSimplex,
                "normal magnitude below tolerance");
  }
  Point normal = raw_normal(rows).normalized();
  const Point centroid = rows.colwise().mean().transpose();
  if (normal.dot(centroid - center) < 0.0) normal = -normal;
  return normal;
}

double simplex_volume(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.cols());
  Eigen::MatrixXd b(n, n);
  for (int k = 1; k <= n; ++k) {
    b.col(k - 1) = (rows.row(k) - rows.row(0)).transpose();
  }
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  return std::abs(b.determinant()) / factorial;
}

double cone_volume(const Eigen::MatrixXd& rows, const Point& apex) {
  Eigen::MatrixXd all(rows.rows() + 1, rows.cols());
  all.row(0) = apex.transpose();
  all.bottomRows(rows.rows()) = rows;
  return simplex_volume(all);
}

Point normal_vector(const BoundaryComplex& c, int simplex) {
  return outward_unit_normal(c.simplex_matrix(simplex), c.center());
}

double enclosed_volume(const BoundaryComplex& c) {
  double total = 0.0;
  for (int s = 0; s < c.num_simplices(); ++s) {
    total += cone_volume(c.simplex_matrix(s), c.center());
  }
  return total;
}

double star_cone_volume(const BoundaryComplex& c, int vertex) {
  double total = 0.0;
  for (int s : c.star(vertex)) {
    total += cone_volume(c.simplex_matrix(s), c.center());
  }
  return total;
}

Eigen::VectorXd barycentric_coordinates(const Point& x, const BoundaryComplex& c,
                                        int simplex, double tol) {
  const Eigen::MatrixXd rows = c.simplex_matrix(simplex);
  if (is_degenerate(rows)) {
    throw Error(ErrorCode::kDegenerateSimplex,
                "simplex " + std::to_string(simplex));
  }
  const int n = c.dimension();
  Eigen::MatrixXd b(n, n - 1);
  for (int k = 1; k < n; ++k) {
    b.col(k - 1) = (rows.row(k) - rows.row(0)).transpose();
  }
  const Point rhs = x - rows.row(0).transpose();
  const Eigen::VectorXd tail = b.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd weights(n);
  weights(0) = 1.0 - tail.sum();
  weights.tail(n - 1) = tail;
  const double residual = (b * tail - rhs).norm();
  if (residual > tol * std::max(1.0, longest_edge(rows)) ||
      weights.minCoeff() < -tol) {
    throw Error(ErrorCode::kNotInSimplex,
                "point is not on simplex " + std::to_string(simplex));
  }
  return weights;
}

std::vector<int> closed_star(const BoundaryComplex& c, int vertex) {
  if (vertex < 0 || vertex >= c.num_vertices()) {
    throw Error(ErrorCode::kUnknownVertex, std::to_string(vertex));
  }
  const auto star = c.star(vertex);
  return {star.begin(), star.end()};
}

namespace {

// Flips the first two ids when the child's raw normal disagrees with the
// parent's.
void orient_like(OrientedSimplex& child, const Eigen::MatrixXd& child_rows,
                 const Point& parent_normal) {
  if (raw_normal(child_rows).dot(parent_normal) < 0.0) {
    std::swap(child.vertex_ids[0], child.vertex_ids[1]);
  }
}

Eigen::MatrixXd rows_of(const std::vector<Point>& vertices,
                        const std::vector<int>& ids) {
  Eigen::MatrixXd rows(ids.size(), vertices.front().size());
  for (size_t k = 0; k < ids.size(); ++k) rows.row(k) = vertices[ids[k]];
  return rows;
}

}  // namespace

BoundaryComplex barycentric_subdivision(const BoundaryComplex& c) {
  const int n = c.dimension();

  // Every face with two or more vertices gets a barycenter vertex, numbered
  // after the existing ones in sorted-key order.
  std::set<std::vector<int>> face_keys;
  for (const auto& s : c.simplices()) {
    std::vector<int> sorted = s.vertex_ids;
    std::sort(sorted.begin(), sorted.end());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<int> key;
      for (int k = 0; k < n; ++k) {
        if (mask & (1u << k)) key.push_back(sorted[k]);
      }
      face_keys.insert(std::move(key));
    }
  }
  std::vector<Point> vertices = c.vertices();
  std::map<std::vector<int>, int> face_vertex;
  for (const auto& key : face_keys) {
    Point barycenter = Point::Zero(n);
    for (int id : key) barycenter += c.vertex(id);
    barycenter /= static_cast<double>(key.size());
    face_vertex.emplace(key, static_cast<int>(vertices.size()));
    vertices.push_back(std::move(barycenter));
  }

  std::vector<OrientedSimplex> children;
  children.reserve(c.simplices().size() * std::tgamma(n + 1));
  for (int s = 0; s < c.num_simplices(); ++s) {
    const auto& ids = c.simplex(s).vertex_ids;
    const Point parent_normal = raw_normal(c.simplex_matrix(s));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      OrientedSimplex child;
      std::vector<int> prefix;
      for (int k = 0; k < n; ++k) {
        prefix.push_back(ids[perm[k]]);
        if (k == 0) {
          child.vertex_ids.push_back(prefix[0]);
          continue;
        }
        std::vector<int> key = prefix;
        std::sort(key.begin(), key.end());
        child.vertex_ids.push_back(face_vertex.at(key));
      }
      const Eigen::MatrixXd rows = rows_of(vertices, child.vertex_ids);
      if (is_degenerate(rows)) {
        throw Error(ErrorCode::kDegenerateSimplex,
                    "barycentric child of simplex " + std::to_string(s));
      }
      orient_like(child, rows, parent_normal);
      children.push_back(std::move(child));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return BoundaryComplex(std::move(vertices), std::move(children), c.center());
}

BoundaryComplex centroidal_subdivision(const BoundaryComplex& c) {
  const int n = c.dimension();
  std::vector<Point> vertices = c.vertices();
  std::vector<OrientedSimplex> children;
  children.reserve(c.simplices().size() * n);
  for (int s = 0; s < c.num_simplices(); ++s) {
    const Eigen::MatrixXd parent = c.simplex_matrix(s);
    const Point parent_normal = raw_normal(parent);
    const int centroid_id = static_cast<int>(vertices.size());
    vertices.push_back(parent.colwise().mean().transpose());
    for (int k = 0; k < n; ++k) {
      OrientedSimplex child = c.simplex(s);
      child.vertex_ids[k] = centroid_id;
      const Eigen::MatrixXd rows = rows_of(vertices, child.vertex_ids);
      if (is_degenerate(rows)) {
        throw Error(ErrorCode::kDegenerateSimplex,
                    "centroidal child of simplex " + std::to_string(s));
      }
      orient_like(child, rows, parent_normal);
      children.push_back(std::move(child));
    }
  }
  return BoundaryComplex(std::move(vertices), std::move(children), c.center());
}

BoundaryComplex scaled_about_center(const BoundaryComplex& c, double factor) {
  std::vector<Point> vertices;
  vertices.reserve(c.num_vertices());
  for (const Point& v : c.vertices()) {
    vertices.push_back(c.center() + factor * (v - c.center()));
  }
  return BoundaryComplex(std::move(vertices), c.simplices(), c.center());
}

}  // namespace rfis
