#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rfis/error.hpp"

namespace rfis {

/// A state-space point (or direction) in R^n.
using Point = Eigen::VectorXd;

/// An (n-1)-simplex of a boundary complex in R^n, stored as n indices into
/// the owning complex's vertex table. The index order fixes the orientation.
struct OrientedSimplex {
  std::vector<int> vertex_ids;

  bool operator==(const OrientedSimplex&) const = default;
};

/// A closed, star-shaped homogeneous (n-1)-complex triangulating the boundary
/// of a polytope in R^n, together with the interior reference point that all
/// vertex rays emanate from.
///
/// Construction only checks index sanity; call validate() to check the
/// manifold / outwardness / distinct-ray invariants.
class BoundaryComplex {
 public:
  BoundaryComplex() = default;
  BoundaryComplex(std::vector<Point> vertices,
                  std::vector<OrientedSimplex> simplices, Point center);

  int dimension() const { return static_cast<int>(center_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_simplices() const { return static_cast<int>(simplices_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int id) const { return vertices_[id]; }
  const std::vector<OrientedSimplex>& simplices() const { return simplices_; }
  const OrientedSimplex& simplex(int s) const { return simplices_[s]; }
  const Point& center() const { return center_; }

  /// Simplex indices incident to vertex `id` (the closed-star index).
  std::span<const int> star(int id) const { return star_index_[id]; }

  /// Vertex coordinates of simplex `s` as rows (the matrix L_Σ).
  Eigen::MatrixXd simplex_matrix(int s) const;

  /// Moves one vertex. Connectivity and the star index are unchanged.
  void set_vertex(int id, const Point& p) { vertices_[id] = p; }

  /// Throws Error(kDegenerateInput) describing the first broken invariant:
  /// closed manifold, outward orientation, distinct rays from the center.
  void validate() const;

 private:
  std::vector<Point> vertices_;
  std::vector<OrientedSimplex> simplices_;
  Point center_;
  std::vector<std::vector<int>> star_index_;
};

// Simplex-level geometry. Every `rows` argument holds one vertex per row.

/// Cofactor-expansion normal of n points in R^n (unnormalized, orientation
/// given by row order).
Point raw_normal(const Eigen::MatrixXd& rows);

/// Largest pairwise vertex distance (length of the longest 1-face).
double longest_edge(const Eigen::MatrixXd& rows);

/// True when the raw normal is below 1e-12 * longest_edge^(n-1).
bool is_degenerate(const Eigen::MatrixXd& rows);

/// Unit normal of an (n-1)-simplex, flipped to point away from `center`.
Point outward_unit_normal(const Eigen::MatrixXd& rows, const Point& center);

/// |det(B)| / n! for n+1 points in R^n; 0 for degenerate input.
double simplex_volume(const Eigen::MatrixXd& rows);

/// Volume of the n-simplex spanned by `apex` and the rows.
double cone_volume(const Eigen::MatrixXd& rows, const Point& apex);

// Complex-level operations.

Point normal_vector(const BoundaryComplex& c, int simplex);

/// Volume of the polytope bounded by `c`, summed over the cones from its
/// center to every boundary simplex.
double enclosed_volume(const BoundaryComplex& c);

/// Summed cone volume over the closed star of `vertex`.
double star_cone_volume(const BoundaryComplex& c, int vertex);

/// Weights λ with x = Σ λ_i v_i. Throws kNotInSimplex if x lies off the
/// simplex by more than `tol` (in weight or, scaled by the longest edge, in
/// residual).
Eigen::VectorXd barycentric_coordinates(const Point& x, const BoundaryComplex& c,
                                        int simplex, double tol = 1e-9);

std::vector<int> closed_star(const BoundaryComplex& c, int vertex);

/// Each simplex is replaced by the n! simplices of its flag subdivision.
BoundaryComplex barycentric_subdivision(const BoundaryComplex& c);

/// Each simplex is coned from its centroid over its n facets.
BoundaryComplex centroidal_subdivision(const BoundaryComplex& c);

/// Same complex with every vertex scaled about the center by `factor`.
BoundaryComplex scaled_about_center(const BoundaryComplex& c, double factor);

}  // namespace rfis
