#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef NLPROBE_CLI
#error "NLPROBE_CLI must name the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlprobe_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path log = fs::temp_directory_path() / "nlprobe_cli_stdout.txt";
  const std::string cmd = env + " " + std::string(NLPROBE_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

// Small 1D problem: wide eps values keep the grids at a few hundred points.
const char* kSmall = R"([model]
horizon = 1
beta_radius = 0.5
[probe]
eps = 0.3
[sweep]
eps = 0.4, 0.35, 0.3, 0.25
[numerics]
checkpoint = false
)";

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--config /nonexistent/x.ini simulate").code == 2);
    const fs::path dir = scratch("usage");
    const auto cfg = write_config(dir, "[model]\nbogus = 1\n");
    const Run r = run("--config " + cfg.string() + " simulate");
    CHECK(r.code == 2);
    CHECK(r.out.find("model.bogus") != std::string::npos);
    CHECK(run("--workers 0 --out " + dir.string() + " xray-forward").code == 2);
    CHECK(run("--out " + dir.string() + " fbp").code == 2);
  }

  TEST_CASE("--version prints the code version") {
    const Run r = run("--version");
    CHECK(r.code == 0);
    CHECK(r.out.find(NLPROBE_VERSION) != std::string::npos);
  }

  TEST_CASE("simulate writes reports that embed the config and version") {
    const fs::path dir = scratch("simulate");
    const auto cfg = write_config(dir, kSmall);
    const Run r = run("--config " + cfg.string() + " --out " + (dir / "a").string() + " simulate");
    REQUIRE(r.code == 0);
    const auto j = read_json(dir / "a" / "simulate.json");
    CHECK(j["version"] == NLPROBE_VERSION);
    CHECK(j["config"]["probe"]["eps"] == 0.3);
    CHECK(j["config"]["output"]["dir"] == (dir / "a").string());
    CHECK(j["summary"]["mass_drift_relative"].get<double>() < 1e-10);
    CHECK(fs::exists(dir / "a" / "final_field.bin"));
    CHECK(fs::exists(dir / "a" / "trajectory.csv"));

    // Same inputs, same bytes.
    REQUIRE(run("--config " + cfg.string() + " --out " + (dir / "b").string() + " simulate").code == 0);
    CHECK(slurp(dir / "a" / "final_field.bin") == slurp(dir / "b" / "final_field.bin"));
    CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "b" / "trajectory.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("environment overrides the config, flags override the environment") {
    const fs::path dir = scratch("env");
    const auto cfg = write_config(dir, kSmall);
    const std::string env = "NLPROBE_OUT=" + (dir / "from_env").string() + " NLPROBE_WORKERS=2";
    REQUIRE(run("--config " + cfg.string() + " xray-forward", env).code == 0);
    const auto j = read_json(dir / "from_env" / "xray.json");
    CHECK(j["config"]["run"]["workers"] == 2);
    REQUIRE(run("--config " + cfg.string() + " --out " + (dir / "from_flag").string() + " --workers 1 xray-forward",
                env)
                .code == 0);
    CHECK(read_json(dir / "from_flag" / "xray.json")["config"]["run"]["workers"] == 1);
    CHECK(run("--config " + cfg.string() + " xray-forward", "NLPROBE_WORKERS=two").code == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("sweep output does not depend on the worker count") {
    const fs::path dir = scratch("sweep");
    const auto cfg = write_config(dir, kSmall);
    REQUIRE(run("--config " + cfg.string() + " --out " + (dir / "w1").string() + " --workers 1 sweep-error").code == 0);
    REQUIRE(run("--config " + cfg.string() + " --out " + (dir / "w3").string() + " --workers 3 sweep-error").code == 0);
    const std::string a = slurp(dir / "w1" / "sweep.csv");
    CHECK(a.rfind("eps,N,L,dt,sup_error,defect,stability_ratio,recovery_error\n", 0) == 0);
    CHECK(a == slurp(dir / "w3" / "sweep.csv"));
    const auto j = read_json(dir / "w1" / "sweep.json");
    CHECK(j["sweep"]["points"].size() == 4);
    CHECK(j["sweep"].contains("error_fit"));
    fs::remove_all(dir);
  }

  TEST_CASE("check-contraction succeeds below the threshold") {
    const fs::path dir = scratch("contraction");
    const Run r = run("--out " + dir.string() + " --seed 5 check-contraction");
    CHECK(r.code == 0);
    const auto j = read_json(dir / "contraction.json");
    CHECK(j["contraction"]["pass"] == true);
    CHECK(j["config"]["run"]["seed"] == 5);
    CHECK(slurp(dir / "contraction.csv").rfind("case,fraction,iteration,distance,ratio\n", 0) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("xray-forward then fbp") {
    const fs::path dir = scratch("fbp");
    const auto cfg = write_config(dir, R"([model]
dim = 2
[probe]
xi = 1, 0
directions = 32
[numerics]
offsets = 64
fbp_N = 32
)");
    REQUIRE(run("--config " + cfg.string() + " --out " + dir.string() + " xray-forward").code == 0);
    REQUIRE(fs::exists(dir / "sinogram.csv"));
    const Run r = run("--config " + cfg.string() + " --out " + dir.string() + " fbp --sinogram " +
                      (dir / "sinogram.csv").string());
    CHECK(r.code == 0);
    const auto j = read_json(dir / "fbp.json");
    CHECK(j.contains("config"));
    CHECK(fs::file_size(dir / "reconstruction.bin") == 16 + 32 * 32 * 16);
    fs::remove_all(dir);
  }

  TEST_CASE("beta too strong for the contraction regime is rejected up front") {
    const fs::path dir = scratch("delta0");
    const auto cfg = write_config(dir, "[model]\nbeta_amplitude = 1500\n[probe]\neps = 0.3\n");
    const Run r = run("--config " + cfg.string() + " --out " + dir.string() + " recover");
    CHECK(r.code == 2);
    CHECK(r.out.find("delta0") != std::string::npos);
    fs::remove_all(dir);
  }

  // The envelope sits far from the sampling hyperplane, so the mask is empty.
  TEST_CASE("an empty amplitude mask is a numerical-domain error") {
    const fs::path dir = scratch("domain");
    const auto cfg = write_config(dir, R"([probe]
a0_center = 5
[numerics]
recover_mode = exact
)");
    const Run r = run("--config " + cfg.string() + " --out " + dir.string() + " recover");
    CHECK(r.code == 3);
    CHECK(r.out.find("masks out") != std::string::npos);
    fs::remove_all(dir);
  }
}
