#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rfis/complex.hpp"
#include "rfis/deformation.hpp"
#include "rfis/dynamics.hpp"
#include "rfis/systems.hpp"

namespace rfis {

inline constexpr int kConfigSchemaVersion = 1;

struct InitialPolytope {
  enum class Kind { kCube, kBox, kVertices, kRegularPolygon, kFile };
  Kind kind = Kind::kCube;
  double half_width = 0.0;  ///< kCube: centered at the run center
  Point lower, upper;       ///< kBox
  std::vector<Point> vertices;
  double radius = 0.0;  ///< kRegularPolygon: centered at the run center
  int sides = 0;
  std::filesystem::path file;  ///< kFile: a .cplx mesh
};

struct VerifyConfig {
  std::string seeds = "random:100:1";
  std::string signal = "battery";
  double horizon = 50.0;
  double step = 1e-3;
  double penetration_tol = -1.0;  ///< negative: 1e-6 × set diameter
};

struct RunConfig {
  std::string system;
  SystemParams params;
  std::optional<NoiseSet> noise;  ///< overrides the system's default Ψ
  double alpha = 0.0;
  Point center;
  int m_max = 8;
  int t_max = 6;
  std::optional<double> lipschitz;  ///< empty: estimate
  InitialPolytope initial;
  SubdivisionKind subdivision = SubdivisionKind::kBarycentric;
  long max_simplices = 100'000;
  long max_sweeps = 10'000;
  long lattice_points = TestLattice::kDefaultBudget;
  double degeneracy_floor = 1e-12;
  std::filesystem::path output_dir = "out";
  VerifyConfig verify;
};

/// Reads and validates a JSON run config. Relative paths inside it resolve
/// against the config file's directory. Throws kParseError, kIoError or
/// ValidationError(field); the center-inside-polytope check happens in
/// build_initial_complex.
RunConfig load_config(const std::filesystem::path& path);

/// Same as load_config for an in-memory document.
RunConfig parse_config(const std::string& text,
                       const std::filesystem::path& base_dir = ".");

/// Builds the system with the config's parameters and noise override.
/// Lipschitz constant: the explicit value, otherwise estimated over the
/// initial polytope's bounding box inflated by 10%.
SystemModel build_system(const RunConfig& cfg, const BoundaryComplex& initial);

/// Triangulates (or loads) the initial polytope around cfg.center. Throws
/// ValidationError("center") if the center is not strictly inside.
BoundaryComplex build_initial_complex(const RunConfig& cfg);

DeformationConfig deformation_config(const RunConfig& cfg);

}  // namespace rfis
