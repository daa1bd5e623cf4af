// Command-line front end: run, check, simulate, volume.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "rfis/complex.hpp"
#include "rfis/cplx_io.hpp"
#include "rfis/pipeline.hpp"
#include "rfis/simulation.hpp"
#include "rfis/systems.hpp"

namespace {

rfis::SystemModel system_from_cli(const std::string& id, double ell,
                                  const rfis::BoundaryComplex& mesh) {
  rfis::SystemModel sys = rfis::benchmark(id);
  if (ell > 0.0) {
    sys.lipschitz = ell;
  } else {
    // Same rule as a run config with lipschitz "estimate".
    rfis::Point lo = mesh.vertices().front(), hi = lo;
    for (const auto& v : mesh.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const rfis::Point pad = 0.05 * (hi - lo);
    sys.lipschitz = rfis::estimate_lipschitz(sys, lo - pad, hi + pad);
  }
  if (sys.dimension != mesh.dimension()) {
    throw rfis::ValidationError("system", "dimension does not match the mesh");
  }
  return sys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust forward-invariant set computation on simplicial boundary complexes"};
  app.require_subcommand(1);
  int threads = 0;
  std::vector<std::string> plugins;
  app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--plugin", plugins, "Shared library registering extra systems");

  // run
  auto* run_cmd = app.add_subcommand("run", "Deform an initial polytope into an invariant set");
  std::string config_path, out_dir;
  bool verify = false;
  run_cmd->add_option("-c,--config", config_path, "JSON run config")->required();
  run_cmd->add_option("-o,--out", out_dir, "Output directory (overrides the config)");
  run_cmd->add_flag("--verify", verify, "Run the trajectory falsifier on the final set");

  // check
  auto* check_cmd = app.add_subcommand("check", "Certify a mesh for a system");
  std::string mesh_path, system_id, report_path;
  double ell = 0.0;
  int m_max = 8;
  check_cmd->add_option("mesh", mesh_path, ".cplx mesh")->required();
  check_cmd->add_option("--system", system_id, "System id, e.g. vdp or thomas:b=0.3")
      ->required();
  check_cmd->add_option("--ell", ell, "Lipschitz constant (default: estimate)");
  check_cmd->add_option("--mmax", m_max, "Finest lattice level")->check(CLI::Range(0, 30));
  check_cmd->add_option("--report", report_path, "Write the JSON report here");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate disturbed trajectories from a mesh");
  std::string signal_spec = "battery", seed_rule = "vertices", traj_dir;
  double horizon = 50.0, step = 1e-3, penetration_tol = -1.0;
  int stride = 10;
  sim_cmd->add_option("mesh", mesh_path, ".cplx mesh")->required();
  sim_cmd->add_option("--system", system_id, "System id")->required();
  sim_cmd->add_option("--signal", signal_spec, "Disturbance signal spec");
  sim_cmd->add_option("--horizon", horizon, "Time horizon");
  sim_cmd->add_option("--step", step, "RK4 step");
  sim_cmd->add_option("--seeds", seed_rule, "vertices | lattice:m | random:k:seed");
  sim_cmd->add_option("--penetration-tol", penetration_tol,
                      "Escape threshold (default 1e-6 x set diameter)");
  sim_cmd->add_option("--stride", stride, "Write every k-th sample")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out", traj_dir, "Directory for trajectory CSVs and report.json")
      ->required();

  // volume
  auto* vol_cmd = app.add_subcommand("volume", "Print the enclosed volume of a mesh");
  vol_cmd->add_option("mesh", mesh_path, ".cplx mesh")->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    for (const auto& p : plugins) rfis::load_plugin(p);

    if (*run_cmd) {
      const rfis::RunConfig cfg = rfis::load_config(config_path);
      rfis::PipelineOptions opts;
      opts.verify = verify;
      if (!out_dir.empty()) opts.output_dir = out_dir;
      opts.log = &std::cerr;
      return rfis::run_pipeline(cfg, opts).exit_status;
    }

    if (*check_cmd) {
      const rfis::BoundaryComplex mesh = rfis::load_cplx(mesh_path);
      const rfis::SystemModel sys = system_from_cli(system_id, ell, mesh);
      const auto report = rfis::check_report(mesh, sys, m_max);
      if (!report_path.empty()) rfis::write_json(report_path, report);
      std::printf("total NTP %.17g over %d simplices: %s\n", report["total_ntp"].get<double>(),
                  mesh.num_simplices(), report["passed"].get<bool>() ? "pass" : "fail");
      return report["passed"].get<bool>() ? rfis::kExitOk : rfis::kExitNotFound;
    }

    if (*sim_cmd) {
      const rfis::BoundaryComplex mesh = rfis::load_cplx(mesh_path);
      const rfis::SystemModel sys = system_from_cli(system_id, 1.0, mesh);
      rfis::SimulationConfig sim;
      sim.step = step;
      sim.horizon = horizon;
      sim.penetration_tol = penetration_tol;
      sim.seeds = rfis::SeedRule::parse(seed_rule);
      sim.signals = rfis::parse_signal(signal_spec, sys);
      const auto report = rfis::falsify(mesh, sys, sim);

      std::filesystem::create_directories(traj_dir);
      const auto seeds = rfis::seed_points(mesh, sim.seeds);
      for (const auto& o : report.outcomes) {
        const auto rec = rfis::integrate(sys, seeds[o.seed_index], sim.signals[o.signal_index],
                                         step, horizon, stride);
        char name[64];
        std::snprintf(name, sizeof name, "traj_%04d_%02d.csv", o.seed_index, o.signal_index);
        rfis::write_trajectory_csv(std::filesystem::path(traj_dir) / name, rec);
      }
      rfis::write_json(std::filesystem::path(traj_dir) / "report.json",
                       rfis::falsification_json(report, sim));
      std::printf("%ld trajectories, %ld escapes, worst penetration %.3g\n",
                  report.n_trajectories, report.n_escapes, report.worst_penetration);
      return report.n_escapes > 0 ? rfis::kExitEscapes : rfis::kExitOk;
    }

    if (*vol_cmd) {
      std::printf("%.17g\n", rfis::enclosed_volume(rfis::load_cplx(mesh_path)));
      return rfis::kExitOk;
    }
  } catch (const rfis::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", rfis::to_string(e.code()), e.what());
    return rfis::exit_status_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return rfis::kExitInternal;
  }
  return rfis::kExitOk;
}
