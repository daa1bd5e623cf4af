#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rfis/config.hpp"
#include "rfis/cplx_io.hpp"
#include "rfis/pipeline.hpp"

using namespace rfis;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"system": "linear_decay", "alpha": 0.9, "center": [0, 0],
                           "t_max": 1, "m_max": 6, "initial": {"cube": 1}})";

std::string field_of(const std::string& text) {
  try {
    const RunConfig cfg = parse_config(text);
    build_initial_complex(cfg);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string with(const std::string& key, const std::string& value) {
  auto j = nlohmann::json::parse(kMinimal);
  j[key] = nlohmann::json::parse(value);
  return j.dump();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rfis_config_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(RFIS_CLI) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// volumes.csv with the wall-time column removed.
std::string volumes_without_timing(const fs::path& p) {
  std::stringstream in(slurp(p)), out;
  for (std::string line; std::getline(in, line);) {
    const auto a = line.find(','), b = line.find(',', a + 1);
    out << line.substr(0, a) << line.substr(b) << '\n';
  }
  return out.str();
}

}  // namespace

TEST(Config, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(RFIS_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
  }
}

TEST(Config, MinimalDefaults) {
  const RunConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.system, "linear_decay");
  EXPECT_EQ(cfg.subdivision, SubdivisionKind::kBarycentric);
  EXPECT_FALSE(cfg.lipschitz.has_value());
  EXPECT_EQ(cfg.initial.kind, InitialPolytope::Kind::kCube);
  EXPECT_EQ(build_initial_complex(cfg).num_simplices(), 4);
}

TEST(Config, SystemForms) {
  const char* base = R"({"alpha": 0.9, "center": [0, 0, 0], "initial": {"cube": 1}, )";
  const RunConfig a = parse_config(std::string(base) + R"("system": "thomas:b=0.2"})");
  EXPECT_EQ(a.system, "thomas");
  EXPECT_DOUBLE_EQ(a.params.at("b"), 0.2);
  const RunConfig b =
      parse_config(std::string(base) + R"("system": {"id": "thomas", "params": {"b": 0.25}}})");
  EXPECT_DOUBLE_EQ(b.params.at("b"), 0.25);
  const RunConfig c = parse_config(std::string(base) + R"("system": "thomas", "b": 0.4})");
  EXPECT_DOUBLE_EQ(c.params.at("b"), 0.4);
  EXPECT_DOUBLE_EQ(build_system(c, build_initial_complex(c)).evaluate(Point::Zero(3)).norm(), 0.0);
}

TEST(Config, ValidationFields) {
  EXPECT_EQ(field_of(with("alpha", "-0.5")), "alpha");
  EXPECT_EQ(field_of(with("alpha", "1")), "alpha");
  EXPECT_EQ(field_of(with("initial", R"({"box": {"lower": [-1, -1], "upper": [1, 1]}})")),
            "<accepted>");
  EXPECT_EQ(field_of(with("initial", R"({"box": {"lower": [1, 1], "upper": [2, 2]}})")),
            "center");
  EXPECT_EQ(field_of(with("center", "[0, 0, 0]")), "center");
  EXPECT_EQ(field_of(with("colour", "1")), "colour");
  EXPECT_EQ(field_of(with("schema_version", "2")), "schema_version");
  EXPECT_EQ(field_of(with("t_max", "-1")), "t_max");
  EXPECT_EQ(field_of(with("m_max", "40")), "m_max");
  EXPECT_EQ(field_of(with("lipschitz", "0")), "lipschitz");
  EXPECT_EQ(field_of(with("system", R"("linear_decay:gain=2")")), "system.gain");
  EXPECT_EQ(field_of(with("initial", R"({"sphere": 1})")), "initial.sphere");
  EXPECT_EQ(field_of(with("budgets", R"({"max_simplices": 0})")), "budgets");
  EXPECT_EQ(field_of(with("verify", R"({"step": 0})")), "verify");
  EXPECT_EQ(field_of(with("subdivision", R"("loop")")), "subdivision");
  EXPECT_EQ(field_of(with("t_max", "0")), "<accepted>");
}

TEST(Config, ParseAndLookupErrors) {
  try {
    parse_config("{ not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
  try {
    parse_config(with("system", R"("lorenz")"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSystem);
  }
  try {
    load_config("/nonexistent/run.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(Config, NoiseOverride) {
  const RunConfig cfg = parse_config(
      with("noise", R"({"box": {"lower": [-0.1, -0.2], "upper": [0.1, 0.2]}})"));
  const SystemModel sys = build_system(cfg, build_initial_complex(cfg));
  Point up(2);
  up << 0.0, 1.0;
  EXPECT_NEAR(sys.noise.support(up), 0.2, 1e-15);
}

TEST(Config, EstimatedLipschitzUsesInitialBox) {
  const RunConfig cfg = parse_config(kMinimal);
  EXPECT_NEAR(build_system(cfg, build_initial_complex(cfg)).lipschitz, 1.2, 1e-6);
}

TEST(Config, FileInitialResolvesRelativeAndRecenters) {
  const fs::path dir = scratch("file");
  const RunConfig first = parse_config(kMinimal);
  save_cplx(dir / "mesh.cplx", build_initial_complex(first));
  std::ofstream(dir / "run.json")
      << R"({"system": "linear_decay", "alpha": 0.9, "center": [0.2, 0.1],
             "initial": {"file": "mesh.cplx"}, "output_dir": "out"})";
  const RunConfig cfg = load_config(dir / "run.json");
  EXPECT_EQ(cfg.initial.file, dir / "mesh.cplx");
  EXPECT_EQ(cfg.output_dir, dir / "out");
  const BoundaryComplex c = build_initial_complex(cfg);
  EXPECT_NEAR(c.center()(0), 0.2, 1e-15);

  std::ofstream(dir / "outside.json")
      << R"({"system": "linear_decay", "alpha": 0.9, "center": [3, 0],
             "initial": {"file": "mesh.cplx"}})";
  try {
    build_initial_complex(load_config(dir / "outside.json"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "center");
  }
}

TEST(Pipeline, ZeroIterationsWritesInitialOnly) {
  const fs::path dir = scratch("t0");
  const RunConfig cfg = parse_config(with("t_max", "0"));
  PipelineOptions opts;
  opts.output_dir = dir;
  const PipelineOutcome out = run_pipeline(cfg, opts);
  EXPECT_EQ(out.exit_status, kExitOk);
  EXPECT_EQ(out.sequence.complexes.size(), 1u);
  EXPECT_TRUE(fs::exists(dir / "iteration_0.cplx"));
  EXPECT_FALSE(fs::exists(dir / "iteration_1.cplx"));
  const auto result = nlohmann::json::parse(slurp(dir / "result.json"));
  EXPECT_TRUE(result["rfis_found"].get<bool>());
  EXPECT_NEAR(result["final_volume"].get<double>(), 4.0, 1e-12);
}

TEST(Pipeline, OutputsAndVerification) {
  const fs::path dir = scratch("verify");
  const RunConfig cfg = parse_config(with("verify", R"({"seeds": "random:20:1", "horizon": 2})"));
  PipelineOptions opts;
  opts.output_dir = dir;
  opts.verify = true;
  const PipelineOutcome out = run_pipeline(cfg, opts);
  EXPECT_EQ(out.exit_status, kExitOk);
  ASSERT_TRUE(out.verification.has_value());
  EXPECT_EQ(out.verification->n_trajectories, 20);
  const auto v = nlohmann::json::parse(slurp(dir / "verify.json"));
  EXPECT_EQ(v["n_escapes"].get<long>(), 0);
  std::stringstream rows(slurp(dir / "volumes.csv"));
  std::string header;
  std::getline(rows, header);
  EXPECT_EQ(header, kVolumesHeader);
  const BoundaryComplex last = load_cplx(dir / "iteration_1.cplx");
  EXPECT_EQ(last.vertices(), out.sequence.complexes.back().vertices());
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_status_for(ErrorCode::kValidationError), kExitConfig);
  EXPECT_EQ(exit_status_for(ErrorCode::kParseError), kExitConfig);
  EXPECT_EQ(exit_status_for(ErrorCode::kBudgetExceeded), kExitBudget);
  EXPECT_EQ(exit_status_for(ErrorCode::kCapacityExceeded), kExitBudget);
  EXPECT_EQ(exit_status_for(ErrorCode::kDegenerateSimplex), kExitGeometry);
  EXPECT_EQ(exit_status_for(ErrorCode::kIoError), kExitIo);
  EXPECT_EQ(exit_status_for(ErrorCode::kNonFiniteDrift), kExitNonFinite);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  EXPECT_EQ(cli("run -c " + write("ok.json", kMinimal) + " -o " + (dir / "ok").string()), 0);
  EXPECT_EQ(cli("run -c " + write("alpha.json", with("alpha", "-0.5"))), kExitConfig);
  EXPECT_EQ(cli("run -c " + write("center.json", with("initial", R"({"box": {"lower": [1, 1], "upper": [2, 2]}})"))),
            kExitConfig);
  EXPECT_EQ(cli("run -c " + write("bad.json", "{")), kExitConfig);
  EXPECT_EQ(cli("run -c " + (dir / "missing.json").string()), kExitIo);
  auto j = nlohmann::json::parse(with("t_max", "4"));
  j["budgets"] = {{"max_simplices", 10}};
  EXPECT_EQ(cli("run -c " + write("budget.json", j.dump()) + " -o " + (dir / "b").string()),
            kExitBudget);
  auto grow = nlohmann::json::parse(with("system", R"("linear_growth")"));
  EXPECT_EQ(cli("run -c " + write("grow.json", grow.dump()) + " -o " + (dir / "g").string()),
            kExitNotFound);

  const std::string mesh = (dir / "ok" / "iteration_0.cplx").string();
  EXPECT_EQ(cli("check " + mesh + " --system linear_decay --report " + (dir / "r.json").string()),
            0);
  EXPECT_EQ(cli("check " + mesh + " --system linear_growth"), kExitNotFound);
  EXPECT_EQ(cli("check " + mesh + " --system thomas"), kExitConfig);
  EXPECT_EQ(cli("volume " + mesh), 0);
  EXPECT_EQ(cli("volume " + (dir / "nope.cplx").string()), kExitIo);
  EXPECT_EQ(cli("simulate " + mesh + " --system linear_growth --horizon 1 --out " +
                (dir / "sim").string()),
            kExitEscapes);
  EXPECT_TRUE(fs::exists(dir / "sim" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "sim" / "traj_0000_00.csv"));
  EXPECT_NE(cli("frobnicate"), 0);
}

TEST(Cli, RepeatRunsAreByteIdentical) {
  const fs::path dir = scratch("det");
  const std::string config = (fs::path(RFIS_CONFIG_DIR) / "thomas.json").string();
  auto j = nlohmann::json::parse(slurp(config));
  j["t_max"] = 2;
  std::ofstream(dir / "run.json") << j.dump();
  ASSERT_EQ(cli("run -c " + (dir / "run.json").string() + " -o " + (dir / "a").string()), 0);
  ASSERT_EQ(cli("--threads 1 run -c " + (dir / "run.json").string() + " -o " +
                (dir / "b").string()),
            0);
  for (int t = 0; t <= 2; ++t) {
    const std::string name = "iteration_" + std::to_string(t) + ".cplx";
    EXPECT_EQ(slurp(dir / "a" / name), slurp(dir / "b" / name)) << name;
  }
  EXPECT_EQ(volumes_without_timing(dir / "a" / "volumes.csv"),
            volumes_without_timing(dir / "b" / "volumes.csv"));
  EXPECT_EQ(slurp(dir / "a" / "result.json"), slurp(dir / "b" / "result.json"));
}

TEST(Pipeline, ThomasCubeCertifiesAndMeshesRoundTrip) {
  const fs::path dir = scratch("thomas");
  const RunConfig cfg = load_config(fs::path(RFIS_CONFIG_DIR) / "thomas.json");
  ASSERT_EQ(cfg.t_max, 3);
  PipelineOptions opts;
  opts.output_dir = dir;
  const PipelineOutcome out = run_pipeline(cfg, opts);
  EXPECT_EQ(out.exit_status, kExitOk);
  const auto result = nlohmann::json::parse(slurp(dir / "result.json"));
  EXPECT_TRUE(result["rfis_found"].get<bool>());
  for (const char* key : {"system", "alpha", "center", "t_max", "m_max", "final_volume"}) {
    EXPECT_TRUE(result.contains(key)) << key;
  }
  std::stringstream rows(slurp(dir / "volumes.csv"));
  std::string header, row0;
  std::getline(rows, header);
  std::getline(rows, row0);
  const auto a = row0.find(','), b = row0.find(',', a + 1), c = row0.find(',', b + 1);
  EXPECT_EQ(row0.substr(0, a), "0");
  EXPECT_NEAR(std::stod(row0.substr(b + 1, c - b - 1)), 8000.0, 1e-9);

  for (int t = 0; t <= cfg.t_max; ++t) {
    const fs::path mesh = dir / ("iteration_" + std::to_string(t) + ".cplx");
    std::ostringstream again;
    write_cplx(again, load_cplx(mesh));
    EXPECT_EQ(again.str(), slurp(mesh)) << mesh;
    EXPECT_EQ(load_cplx(mesh).vertices(), out.sequence.complexes[t].vertices());
  }
}

TEST(Pipeline, CubeOverBudget) {
  RunConfig cfg = load_config(fs::path(RFIS_CONFIG_DIR) / "thomas.json");
  cfg.max_simplices = 10;
  PipelineOptions opts;
  opts.output_dir = scratch("budget");
  try {
    run_pipeline(cfg, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
    EXPECT_EQ(exit_status_for(e.code()), kExitBudget);
  }
}
