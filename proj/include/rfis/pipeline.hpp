#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "rfis/config.hpp"
#include "rfis/deformation.hpp"
#include "rfis/simulation.hpp"

namespace rfis {

/// Process exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,      ///< parse/validation errors, unknown system
  kExitBudget = 3,      ///< simplex/sweep/lattice budget exceeded
  kExitGeometry = 4,    ///< degenerate simplex or input, center outside, no ray hit
  kExitNotFound = 5,    ///< final set does not certify
  kExitIo = 6,
  kExitNonFinite = 7,   ///< drift produced NaN or infinity
  kExitEscapes = 8,     ///< falsifier found an escaping trajectory
};

int exit_status_for(ErrorCode code);

struct PipelineOptions {
  bool verify = false;
  std::optional<std::filesystem::path> output_dir;  ///< overrides the config
  std::ostream* log = nullptr;
};

struct PipelineOutcome {
  int exit_status = kExitOk;
  SystemModel system;
  RunSequence sequence;
  std::optional<FalsificationReport> verification;
};

/// Builds the system and initial complex, runs the deformation and writes
///   iteration_<t>.cplx, volumes.csv, result.json (and verify.json)
/// under the output directory. Module errors propagate as exceptions; the
/// returned status covers "not found" and falsifier escapes.
PipelineOutcome run_pipeline(const RunConfig& cfg, const PipelineOptions& opts = {});

/// One volumes.csv data row (no newline). Volume and NTP use 17 significant
/// digits so reruns compare byte for byte.
std::string volumes_row(const IterationRecord& r);
inline constexpr const char* kVolumesHeader = "iteration,wall_time_s,volume,total_ntp";

/// Per-simplex certification report of `c`.
nlohmann::json check_report(const BoundaryComplex& c, const SystemModel& sys, int m_max);

/// Falsifier batch summary (per-trajectory outcomes included).
nlohmann::json falsification_json(const FalsificationReport& report,
                                  const SimulationConfig& cfg);

/// Writes `t,x1,...,xn` rows.
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec);

/// Writes `j` (pretty-printed) to `path`; throws kIoError.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace rfis
