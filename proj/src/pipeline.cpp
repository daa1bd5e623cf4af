#include "rfis/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "rfis/cplx_io.hpp"
#include "rfis/invariance.hpp"

namespace rfis {
namespace {

using nlohmann::json;

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) a.push_back(p(k));
  return a;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

int exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kValidationError:
    case ErrorCode::kUnknownSystem:
      return kExitConfig;
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kCapacityExceeded:
      return kExitBudget;
    case ErrorCode::kDegenerateSimplex:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kCenterOutside:
    case ErrorCode::kNoIntersection:
    case ErrorCode::kNotInSimplex:
    case ErrorCode::kUnknownVertex:
    case ErrorCode::kEmptySet:
      return kExitGeometry;
    case ErrorCode::kIoError:
      return kExitIo;
    case ErrorCode::kNonFiniteDrift:
      return kExitNonFinite;
  }
  return kExitInternal;
}

std::string volumes_row(const IterationRecord& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d,%.6f,%.17g,%.17g", r.iteration, r.wall_time_s,
                r.volume, r.total_ntp);
  return buf;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec) {
  std::ofstream out = open_out(path);
  const int n = rec.samples.empty() ? 0 : static_cast<int>(rec.samples.front().x.size());
  out << 't';
  for (int k = 1; k <= n; ++k) out << ",x" << k;
  out << '\n';
  char buf[40];
  for (const auto& s : rec.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    out << buf;
    for (int k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", s.x(k));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

json check_report(const BoundaryComplex& c, const SystemModel& sys, int m_max) {
  const auto lattice = cached_lattice(c.dimension(), m_max);
  const std::vector<SimplexVerdict> verdicts = certify_all(c, sys, *lattice, m_max);
  json simplices = json::array();
  double total = 0.0;
  for (size_t s = 0; s < verdicts.size(); ++s) {
    const SimplexVerdict& v = verdicts[s];
    total += v.ntp_ratio;
    json entry = {{"simplex", s},
                  {"ntp", v.ntp_ratio},
                  {"passed_at_level", v.passed_at_level ? json(*v.passed_at_level) : json()}};
    if (!v.violating_points.empty()) {
      json pts = json::array();
      for (const Point& p : v.violating_points) pts.push_back(point_json(p));
      entry["violating_points"] = std::move(pts);
    }
    simplices.push_back(std::move(entry));
  }
  return {{"system", sys.name},
          {"lipschitz", sys.lipschitz},
          {"m_max", m_max},
          {"num_simplices", c.num_simplices()},
          {"total_ntp", total},
          {"passed", total == 0.0},
          {"simplices", std::move(simplices)}};
}

json falsification_json(const FalsificationReport& report, const SimulationConfig& cfg) {
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    outcomes.push_back({{"seed", o.seed_index},
                        {"signal", cfg.signals.empty() ? std::string("zero")
                                                       : cfg.signals[o.signal_index].label()},
                        {"escaped", o.escaped},
                        {"escape_time", o.escaped ? json(o.escape_time) : json()},
                        {"blew_up", o.blew_up},
                        {"max_excess", o.max_excess}});
  }
  return {{"n_trajectories", report.n_trajectories},
          {"n_escapes", report.n_escapes},
          {"n_blowups", report.n_blowups},
          {"worst_penetration", report.worst_penetration},
          {"penetration_tol", report.penetration_tol},
          {"step", cfg.step},
          {"horizon", cfg.horizon},
          {"trajectories", std::move(outcomes)}};
}

PipelineOutcome run_pipeline(const RunConfig& cfg, const PipelineOptions& opts) {
  const std::filesystem::path dir = opts.output_dir.value_or(cfg.output_dir);
  auto log = [&](const std::string& line) {
    if (opts.log) *opts.log << line << '\n' << std::flush;
  };

  const BoundaryComplex initial = build_initial_complex(cfg);
  PipelineOutcome outcome;
  outcome.system = build_system(cfg, initial);
  const SystemModel& sys = outcome.system;
  log("system " + sys.name + ", lipschitz " + std::to_string(sys.lipschitz) + ", " +
      std::to_string(initial.num_simplices()) + " initial simplices");

  ensure_dir(dir);
  std::ofstream volumes = open_out(dir / "volumes.csv");
  volumes << kVolumesHeader << '\n';
  RunHooks hooks;
  hooks.on_iteration = [&](const IterationRecord& r, const BoundaryComplex& c) {
    save_cplx(dir / ("iteration_" + std::to_string(r.iteration) + ".cplx"), c);
    volumes << volumes_row(r) << '\n' << std::flush;
    log("iteration " + std::to_string(r.iteration) + ": volume " + std::to_string(r.volume) +
        ", total NTP " + std::to_string(r.total_ntp) + ", " +
        std::to_string(c.num_simplices()) + " simplices");
  };
  outcome.sequence = run(sys, initial, deformation_config(cfg), hooks);
  volumes.close();
  if (!volumes) throw Error(ErrorCode::kIoError, "write failed: volumes.csv");

  const RunSequence& seq = outcome.sequence;
  json result = {{"system", cfg.system},
                 {"params", cfg.params},
                 {"alpha", cfg.alpha},
                 {"center", point_json(cfg.center)},
                 {"t_max", cfg.t_max},
                 {"m_max", cfg.m_max},
                 {"lipschitz", sys.lipschitz},
                 {"boundary_jacobian_bound", boundary_jacobian_bound(seq.complexes.back(), sys)},
                 {"rfis_found", seq.rfis_found},
                 {"final_volume", seq.records.back().volume},
                 {"summary", seq.summary}};
  write_json(dir / "result.json", result);
  log(seq.summary);
  outcome.exit_status = seq.rfis_found ? kExitOk : kExitNotFound;

  if (opts.verify) {
    SimulationConfig sim;
    sim.step = cfg.verify.step;
    sim.horizon = cfg.verify.horizon;
    sim.penetration_tol = cfg.verify.penetration_tol;
    sim.seeds = SeedRule::parse(cfg.verify.seeds);
    sim.signals = parse_signal(cfg.verify.signal, sys);
    outcome.verification = falsify(seq.complexes.back(), sys, sim);
    write_json(dir / "verify.json", falsification_json(*outcome.verification, sim));
    log("falsifier: " + std::to_string(outcome.verification->n_escapes) + " escapes in " +
        std::to_string(outcome.verification->n_trajectories) + " trajectories");
    if (outcome.exit_status == kExitOk && outcome.verification->n_escapes > 0) {
      outcome.exit_status = kExitEscapes;
    }
  }
  return outcome;
}

}  // namespace rfis
