// End-to-end checks of the command-line tool: spawns the real binary.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = QRL_CLI_PATH;

int run(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = kCli + " " + args + " > " + stdout_file.string() + " 2>&1";
  return std::system(cmd.c_str());
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "qrl_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("train emits one csv per seed plus a summary with provenance") {
  const fs::path dir = temp_dir("train");
  const int rc = run("train --algo ppo --env pendulum --steps 512 --seeds 0,1 --quantize "
                     "--bound 127 --m 1 --out " + dir.string(),
                     dir / "stdout.json");
  REQUIRE(rc == 0);
  CHECK(fs::exists(dir / "ppo_pendulum_q_seed0.csv"));
  CHECK(fs::exists(dir / "ppo_pendulum_q_seed1.csv"));

  // csv schema line
  std::ifstream csv(dir / "ppo_pendulum_q_seed0.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "step,return_mean,return_std,ms_per_step,loss_policy,loss_value_or_q,alpha");

  const json summary = read_json(dir / "ppo_pendulum_q_summary.json");
  CHECK(summary["per_seed"].size() == 2);
  // flags recorded verbatim in the provenance block
  CHECK(summary["provenance"]["quantize"] == true);
  CHECK(summary["provenance"]["bound"] == 127.0);
  CHECK(summary["provenance"]["m"] == 1);
  CHECK(summary["provenance"]["algo"] == "ppo");
  CHECK(summary.contains("final_return_mean"));
  CHECK(summary.contains("final_return_std"));
  CHECK(summary.contains("mean_ms_per_step"));
}

TEST_CASE("config file provides defaults, flags override") {
  const fs::path dir = temp_dir("config");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"algo": "ppo", "env": "reacher", "steps": 256, "seeds": "3", "quantize": true})";
  }
  const int rc = run("train --config " + (dir / "cfg.json").string() + " --steps 300 --out " +
                         dir.string(),
                     dir / "stdout.json");
  REQUIRE(rc == 0);
  const json summary = read_json(dir / "ppo_reacher_q_summary.json");
  CHECK(summary["provenance"]["env"] == "reacher");
  CHECK(summary["provenance"]["steps"] == 300);  // flag beat the file
  CHECK(summary["provenance"]["m"] == 1);        // ppo default
}

TEST_CASE("report-memory covers both arms and the known shapes") {
  const fs::path dir = temp_dir("report");
  const int rc = run("report-memory --algo sac --shape humanoid --entries 1000000",
                     dir / "out.json");
  REQUIRE(rc == 0);
  const json j = read_json(dir / "out.json");
  CHECK(j["baseline"]["reduction_ratio"] == 1.0);
  CHECK(j["quantized"]["reduction_ratio"].get<double>() == doctest::Approx(3.962).epsilon(1e-3));
  CHECK(j["config"]["m"] == 2);
  CHECK(j["config"]["total_bits"] == 15);

  const int rc2 = run("report-memory --algo ppo --obs-dim 391 --act-dim 16 --entries 8300 "
                      "--layout sar",
                      dir / "out2.json");
  REQUIRE(rc2 == 0);
  const json j2 = read_json(dir / "out2.json");
  CHECK(j2["baseline"]["buffer_bytes"] == 27091200);
}

TEST_CASE("bench reports a 3-decimal relative factor and rejects zero steps") {
  const fs::path dir = temp_dir("bench");
  const int rc = run("bench --algo ppo --env pendulum --steps 512", dir / "bench.json");
  REQUIRE(rc == 0);
  const json j = read_json(dir / "bench.json");
  CHECK(j.contains("ms_per_step_baseline"));
  CHECK(j.contains("ms_per_step_quantized"));
  const double t = j["relative_factor"].get<double>();
  CHECK(t == doctest::Approx(std::round(t * 1000.0) / 1000.0).epsilon(1e-12));

  const int rc_zero = run("bench --algo ppo --steps 0", dir / "zero.json");
  CHECK(rc_zero != 0);
}

TEST_CASE("bad arguments exit nonzero") {
  const fs::path dir = temp_dir("bad");
  CHECK(run("train --algo dqn --steps 10", dir / "a.json") != 0);
  CHECK(run("train --algo ppo --env walker --steps 10 --seeds 0 --out " + dir.string(),
            dir / "b.json") != 0);
  CHECK(run("report-memory --algo sac --shape spot", dir / "c.json") != 0);
  CHECK(run("frobnicate", dir / "d.json") != 0);
}
