#include "rfis/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rfis/containment.hpp"
#include "rfis/cplx_io.hpp"
#include "rfis/polytope.hpp"

namespace rfis {
namespace {

using nlohmann::json;

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
  return v;
}

long integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ValidationError(field, "expected an integer");
  return j.get<long>();
}

Point vector_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a number array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k) {
    p(static_cast<Eigen::Index>(k)) = number(j[k], field);
  }
  return p;
}

std::vector<Point> point_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a list of points");
  std::vector<Point> pts;
  for (const auto& item : j) pts.push_back(vector_of(item, field));
  for (const auto& p : pts) {
    if (p.size() != pts.front().size()) throw ValidationError(field, "mixed dimensions");
  }
  return pts;
}

void only_keys(const json& obj, const std::string& field, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ValidationError(field, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError(field + "." + key, "unknown field");
  }
}

NoiseSet parse_noise(const json& j) {
  if (j.is_string() && j.get<std::string>() == "zero") return NoiseSet::zero();
  if (j.is_object() && j.contains("box")) {
    only_keys(j, "noise", {"box"});
    only_keys(j["box"], "noise.box", {"lower", "upper"});
    if (!j["box"].contains("lower") || !j["box"].contains("upper")) {
      throw ValidationError("noise.box", "needs lower and upper");
    }
    const Point lo = vector_of(j["box"]["lower"], "noise.box.lower");
    const Point hi = vector_of(j["box"]["upper"], "noise.box.upper");
    if (lo.size() != hi.size() || (hi - lo).minCoeff() < 0.0) {
      throw ValidationError("noise.box", "need lower <= upper of equal dimension");
    }
    return NoiseSet::box(lo, hi);
  }
  if (j.is_object() && j.contains("vertices")) {
    only_keys(j, "noise", {"vertices"});
    return NoiseSet::polytope(point_list(j["vertices"], "noise.vertices"));
  }
  throw ValidationError("noise", "expected \"zero\", {box: ...} or {vertices: ...}");
}

InitialPolytope parse_initial(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || j.size() != 1) {
    throw ValidationError("initial", "expected exactly one of cube, box, vertices, "
                                     "regular_polygon, file");
  }
  InitialPolytope init;
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  if (key == "cube") {
    init.kind = InitialPolytope::Kind::kCube;
    init.half_width = number(value, "initial.cube");
    if (!(init.half_width > 0.0)) throw ValidationError("initial.cube", "must be > 0");
  } else if (key == "box") {
    init.kind = InitialPolytope::Kind::kBox;
    only_keys(value, "initial.box", {"lower", "upper"});
    if (!value.contains("lower") || !value.contains("upper")) {
      throw ValidationError("initial.box", "needs lower and upper");
    }
    init.lower = vector_of(value["lower"], "initial.box.lower");
    init.upper = vector_of(value["upper"], "initial.box.upper");
    if (init.lower.size() != init.upper.size() ||
        !((init.upper - init.lower).minCoeff() > 0.0)) {
      throw ValidationError("initial.box", "need lower < upper of equal dimension");
    }
  } else if (key == "vertices") {
    init.kind = InitialPolytope::Kind::kVertices;
    init.vertices = point_list(value, "initial.vertices");
  } else if (key == "regular_polygon") {
    init.kind = InitialPolytope::Kind::kRegularPolygon;
    only_keys(value, "initial.regular_polygon", {"radius", "k"});
    if (!value.contains("radius") || !value.contains("k")) {
      throw ValidationError("initial.regular_polygon", "needs radius and k");
    }
    init.radius = number(value["radius"], "initial.regular_polygon.radius");
    init.sides = static_cast<int>(integer(value["k"], "initial.regular_polygon.k"));
    if (!(init.radius > 0.0) || init.sides < 3) {
      throw ValidationError("initial.regular_polygon", "need radius > 0 and k >= 3");
    }
  } else if (key == "file") {
    init.kind = InitialPolytope::Kind::kFile;
    if (!value.is_string()) throw ValidationError("initial.file", "expected a path");
    init.file = value.get<std::string>();
    if (init.file.is_relative()) init.file = base / init.file;
  } else {
    throw ValidationError("initial." + key, "unknown initial polytope kind");
  }
  return init;
}

SubdivisionKind parse_subdivision(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "barycentric") return SubdivisionKind::kBarycentric;
    if (s == "centroidal") return SubdivisionKind::kCentroidal;
  }
  throw ValidationError("subdivision", "expected \"barycentric\" or \"centroidal\"");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "config: expected an object");

  RunConfig cfg;
  // Absent means the current version.
  if (doc.contains("schema_version") &&
      integer(doc["schema_version"], "schema_version") != kConfigSchemaVersion) {
    throw ValidationError("schema_version",
                          "must be " + std::to_string(kConfigSchemaVersion));
  }

  // System: "name", "name:k=v,...", or {id, params}.
  if (!doc.contains("system")) throw ValidationError("system", "missing");
  const json& sys = doc["system"];
  if (sys.is_string()) {
    std::tie(cfg.system, cfg.params) = parse_system_id(sys.get<std::string>());
  } else if (sys.is_object()) {
    only_keys(sys, "system", {"id", "params"});
    if (!sys.contains("id") || !sys["id"].is_string()) {
      throw ValidationError("system.id", "expected a string");
    }
    std::tie(cfg.system, cfg.params) = parse_system_id(sys["id"].get<std::string>());
    if (sys.contains("params")) {
      if (!sys["params"].is_object()) throw ValidationError("system.params", "expected an object");
      for (const auto& [key, value] : sys["params"].items()) {
        cfg.params[key] = number(value, "system.params." + key);
      }
    }
  } else {
    throw ValidationError("system", "expected a string or {id, params}");
  }
  const SystemRegistry& registry = SystemRegistry::global();
  if (!registry.contains(cfg.system)) {
    throw Error(ErrorCode::kUnknownSystem, "unknown system '" + cfg.system + "'");
  }
  const SystemParams& accepted = registry.entry(cfg.system).defaults;

  static const std::set<std::string> kFields = {
      "schema_version", "system", "noise",   "alpha",       "center",
      "m_max",          "t_max",  "lipschitz", "initial",   "subdivision",
      "budgets",        "output_dir", "verify", "degeneracy_floor"};
  for (const auto& [key, value] : doc.items()) {
    // Top-level numbers naming a system parameter (e.g. "mu": 1). A numeric
    // "noise" is the curve-tracking width parameter, not an override.
    if (value.is_number() && accepted.count(key)) {
      cfg.params[key] = number(value, key);
      continue;
    }
    if (!kFields.count(key)) throw ValidationError(key, "unknown field");
  }

  if (doc.contains("noise") && !doc["noise"].is_number()) cfg.noise = parse_noise(doc["noise"]);

  if (!doc.contains("alpha")) throw ValidationError("alpha", "missing");
  cfg.alpha = number(doc["alpha"], "alpha");
  if (!(cfg.alpha > 0.0)) throw ValidationError("alpha", "must be > 0");
  if (cfg.alpha == 1.0) throw ValidationError("alpha", "must differ from 1");

  if (!doc.contains("center")) throw ValidationError("center", "missing");
  cfg.center = vector_of(doc["center"], "center");

  if (doc.contains("m_max")) cfg.m_max = static_cast<int>(integer(doc["m_max"], "m_max"));
  if (cfg.m_max < 0 || cfg.m_max > 30) throw ValidationError("m_max", "must be in [0, 30]");
  if (doc.contains("t_max")) cfg.t_max = static_cast<int>(integer(doc["t_max"], "t_max"));
  if (cfg.t_max < 0) throw ValidationError("t_max", "must be >= 0");

  if (doc.contains("lipschitz")) {
    const json& l = doc["lipschitz"];
    if (l.is_string() && l.get<std::string>() == "estimate") {
      cfg.lipschitz.reset();
    } else {
      cfg.lipschitz = number(l, "lipschitz");
      if (!(*cfg.lipschitz > 0.0)) throw ValidationError("lipschitz", "must be > 0");
    }
  }

  if (!doc.contains("initial")) throw ValidationError("initial", "missing");
  cfg.initial = parse_initial(doc["initial"], base_dir);
  if (doc.contains("subdivision")) cfg.subdivision = parse_subdivision(doc["subdivision"]);

  if (doc.contains("degeneracy_floor")) {
    cfg.degeneracy_floor = number(doc["degeneracy_floor"], "degeneracy_floor");
    if (!(cfg.degeneracy_floor > 0.0)) {
      throw ValidationError("degeneracy_floor", "must be > 0");
    }
  }

  if (doc.contains("budgets")) {
    const json& b = doc["budgets"];
    only_keys(b, "budgets", {"max_simplices", "max_sweeps", "lattice_points"});
    if (b.contains("max_simplices")) {
      cfg.max_simplices = integer(b["max_simplices"], "budgets.max_simplices");
    }
    if (b.contains("max_sweeps")) cfg.max_sweeps = integer(b["max_sweeps"], "budgets.max_sweeps");
    if (b.contains("lattice_points")) {
      cfg.lattice_points = integer(b["lattice_points"], "budgets.lattice_points");
    }
    if (cfg.max_simplices <= 0 || cfg.max_sweeps <= 0 || cfg.lattice_points <= 0) {
      throw ValidationError("budgets", "budgets must be positive");
    }
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ValidationError("output_dir", "expected a path");
    cfg.output_dir = doc["output_dir"].get<std::string>();
    if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
  }

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    only_keys(v, "verify", {"seeds", "signal", "horizon", "step", "penetration_tol"});
    if (v.contains("seeds")) {
      if (!v["seeds"].is_string()) throw ValidationError("verify.seeds", "expected a string");
      cfg.verify.seeds = v["seeds"].get<std::string>();
    }
    if (v.contains("signal")) {
      if (!v["signal"].is_string()) throw ValidationError("verify.signal", "expected a string");
      cfg.verify.signal = v["signal"].get<std::string>();
    }
    if (v.contains("horizon")) cfg.verify.horizon = number(v["horizon"], "verify.horizon");
    if (v.contains("step")) cfg.verify.step = number(v["step"], "verify.step");
    if (v.contains("penetration_tol")) {
      cfg.verify.penetration_tol = number(v["penetration_tol"], "verify.penetration_tol");
    }
    if (!(cfg.verify.step > 0.0) || !(cfg.verify.horizon >= cfg.verify.step)) {
      throw ValidationError("verify", "need 0 < step <= horizon");
    }
  }

  // Reject unknown parameters and build once so bad configs fail before any
  // compute. The factory is called directly to skip the Lipschitz estimate.
  SystemParams full = accepted;
  for (const auto& [k, v] : cfg.params) {
    if (!accepted.count(k)) throw ValidationError("system." + k, "unknown parameter");
    full[k] = v;
  }
  const SystemModel probe = registry.entry(cfg.system).make(full);
  if (probe.dimension != cfg.center.size()) {
    throw ValidationError("center", "dimension " + std::to_string(cfg.center.size()) +
                                        " does not match system dimension " +
                                        std::to_string(probe.dimension));
  }
  if (cfg.noise) {
    const auto extremes = cfg.noise->extreme_points(probe.dimension);
    if (!extremes.empty() && extremes.front().size() != probe.dimension) {
      throw ValidationError("noise", "dimension does not match the system");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
}

SystemModel build_system(const RunConfig& cfg, const BoundaryComplex& initial) {
  SystemModel sys = SystemRegistry::global().make(cfg.system, cfg.params);
  if (cfg.noise) sys.noise = *cfg.noise;
  if (cfg.lipschitz) {
    sys.lipschitz = *cfg.lipschitz;
  } else {
    Point lo = initial.vertices().front(), hi = lo;
    for (const Point& v : initial.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const Point pad = 0.05 * (hi - lo);
    sys.lipschitz = estimate_lipschitz(sys, lo - pad, hi + pad);
  }
  return sys;
}

BoundaryComplex build_initial_complex(const RunConfig& cfg) {
  const InitialPolytope& init = cfg.initial;
  const int n = static_cast<int>(cfg.center.size());
  std::vector<Point> points;
  switch (init.kind) {
    case InitialPolytope::Kind::kCube:
      points = box_corners(cfg.center - Point::Constant(n, init.half_width),
                           cfg.center + Point::Constant(n, init.half_width));
      break;
    case InitialPolytope::Kind::kBox:
      if (init.lower.size() != n) throw ValidationError("initial.box", "dimension mismatch");
      points = box_corners(init.lower, init.upper);
      break;
    case InitialPolytope::Kind::kVertices:
      if (init.vertices.front().size() != n) {
        throw ValidationError("initial.vertices", "dimension mismatch");
      }
      points = init.vertices;
      break;
    case InitialPolytope::Kind::kRegularPolygon:
      if (n != 2) throw ValidationError("initial.regular_polygon", "only for n = 2");
      points = regular_polygon(cfg.center, init.radius, init.sides);
      break;
    case InitialPolytope::Kind::kFile: {
      const BoundaryComplex loaded = load_cplx(init.file);
      if (loaded.dimension() != n) throw ValidationError("initial.file", "dimension mismatch");
      std::vector<OrientedSimplex> simplices(loaded.simplices().begin(),
                                             loaded.simplices().end());
      if (containment(cfg.center, loaded) != Location::kInside) {
        throw ValidationError("center", "not strictly inside the initial polytope");
      }
      BoundaryComplex recentered(loaded.vertices(), simplices, cfg.center);
      try {
        recentered.validate();
      } catch (const Error& e) {
        throw ValidationError("center", std::string("mesh is not star-shaped about it: ") +
                                            e.what());
      }
      return recentered;
    }
  }
  try {
    return triangulate_convex_polytope(points, cfg.center);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCenterOutside) {
      throw ValidationError("center", "not strictly inside the initial polytope");
    }
    throw;
  }
}

DeformationConfig deformation_config(const RunConfig& cfg) {
  DeformationConfig d;
  d.alpha = cfg.alpha;
  d.center = cfg.center;
  d.m_max = cfg.m_max;
  d.t_max = cfg.t_max;
  d.subdivision = cfg.subdivision;
  d.degeneracy_floor = cfg.degeneracy_floor;
  d.max_simplices = cfg.max_simplices;
  d.max_sweeps = cfg.max_sweeps;
  d.lattice_budget = cfg.lattice_points;
  return d;
}

}  // namespace rfis
