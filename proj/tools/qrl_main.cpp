// Experiment runner: learning curves, memory breakdowns and per-step
// wall-clock overhead for quantized vs full-precision observation storage.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrl/env.hpp"
#include "qrl/memory_report.hpp"
#include "qrl/quant.hpp"
#include "qrl/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ExperimentConfig {
  std::string algo = "sac";
  std::string env = "pendulum";
  std::uint64_t steps = 30000;
  std::string seeds = "0";
  bool quantize = false;
  double bound = 127.0;
  int m = -1;  // -1 = per-algorithm default (1 for ppo, 2 for sac)
  std::uint64_t buffer_size = 1'000'000;
  std::size_t float_bytes = 8;
  std::string out = ".";
  unsigned jobs = 0;  // 0 = min(#seeds, hardware threads)
  // report-memory shape selection
  std::string shape;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  std::uint64_t entries = 0;
  std::string layout = "full";
  std::uint64_t bench_seed = 0;
  std::size_t final_window = 10;
};

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  const auto range_pos = s.find("..");
  if (range_pos != std::string::npos) {
    const std::uint64_t lo = std::stoull(s.substr(0, range_pos));
    const std::uint64_t hi = std::stoull(s.substr(range_pos + 2));
    if (hi < lo) throw std::invalid_argument("seed range end before start: " + s);
    for (std::uint64_t v = lo; v <= hi; ++v) seeds.push_back(v);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds in '" + s + "'");
  return seeds;
}

int resolved_decimals(const ExperimentConfig& cfg, qrl::AlgoKind algo) {
  if (cfg.m >= 0) return cfg.m;
  return algo == qrl::AlgoKind::ppo ? 1 : 2;
}

// CLI flags override JSON config entries, which override the built-in
// defaults; the config file is applied before CLI11 parses the flags.
void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json j = json::parse(in);
  if (j.contains("algo")) cfg.algo = j["algo"].get<std::string>();
  if (j.contains("env")) cfg.env = j["env"].get<std::string>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<std::uint64_t>();
  if (j.contains("seeds")) {
    if (j["seeds"].is_string()) cfg.seeds = j["seeds"].get<std::string>();
    else {
      std::string s;
      for (const auto& v : j["seeds"]) s += (s.empty() ? "" : ",") + std::to_string(v.get<std::uint64_t>());
      cfg.seeds = s;
    }
  }
  if (j.contains("quantize")) cfg.quantize = j["quantize"].get<bool>();
  if (j.contains("bound")) cfg.bound = j["bound"].get<double>();
  if (j.contains("m")) cfg.m = j["m"].get<int>();
  if (j.contains("buffer_size")) cfg.buffer_size = j["buffer_size"].get<std::uint64_t>();
  if (j.contains("float_bytes")) cfg.float_bytes = j["float_bytes"].get<std::size_t>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<unsigned>();
  if (j.contains("shape")) cfg.shape = j["shape"].get<std::string>();
  if (j.contains("obs_dim")) cfg.obs_dim = j["obs_dim"].get<std::size_t>();
  if (j.contains("act_dim")) cfg.act_dim = j["act_dim"].get<std::size_t>();
  if (j.contains("entries")) cfg.entries = j["entries"].get<std::uint64_t>();
  if (j.contains("layout")) cfg.layout = j["layout"].get<std::string>();
}

json provenance(const ExperimentConfig& cfg, qrl::AlgoKind algo, const char* command) {
  return json{{"command", command},
              {"algo", cfg.algo},
              {"env", cfg.env},
              {"steps", cfg.steps},
              {"seeds", cfg.seeds},
              {"quantize", cfg.quantize},
              {"bound", cfg.bound},
              {"m", resolved_decimals(cfg, algo)},
              {"buffer_size", cfg.buffer_size},
              {"float_bytes", cfg.float_bytes},
              {"out", cfg.out}};
}

qrl::TrainOptions make_train_options(const ExperimentConfig& cfg, qrl::AlgoKind algo,
                                     std::uint64_t seed) {
  qrl::TrainOptions opt;
  opt.algo = algo;
  opt.env_name = cfg.env;
  opt.total_steps = cfg.steps;
  opt.seed = seed;
  opt.sac.buffer_capacity = cfg.buffer_size;
  if (cfg.quantize)
    opt.scheme = qrl::make_scheme(cfg.bound, resolved_decimals(cfg, algo));
  return opt;
}

double mean_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double var = 0;
  for (double x : v) var += (x - m) * (x - m);
  return v.empty() ? 0.0 : std::sqrt(var / static_cast<double>(v.size()));
}

int cmd_train(const ExperimentConfig& cfg) {
  const qrl::AlgoKind algo = qrl::algo_kind_from_string(cfg.algo);
  const auto seeds = parse_seeds(cfg.seeds);
  fs::create_directories(cfg.out);

  unsigned jobs = cfg.jobs;
  if (jobs == 0)
    jobs = std::min<unsigned>(static_cast<unsigned>(seeds.size()),
                              std::max(1u, std::thread::hardware_concurrency()));

  std::vector<qrl::TrainResult> results(seeds.size());
  std::vector<std::string> errors(seeds.size());
  // seeds share nothing; run them as independent workers
  std::mutex next_mu;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mu);
        if (next >= seeds.size()) return;
        i = next++;
      }
      try {
        results[i] = qrl::train(make_train_options(cfg, algo, seeds[i]));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("seed " + std::to_string(seeds[i]) + ": " + errors[i]);

  const std::string tag = cfg.quantize ? "q" : "b";
  json per_seed = json::array();
  std::vector<double> finals, ms;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string csv_name =
        cfg.algo + "_" + cfg.env + "_" + tag + "_seed" + std::to_string(seeds[i]) + ".csv";
    qrl::write_curve_csv(fs::path(cfg.out) / csv_name, results[i].records);
    const double fin = results[i].final_return_mean(cfg.final_window);
    finals.push_back(fin);
    ms.push_back(results[i].mean_ms_per_step);
    std::vector<double> tail;
    const auto& er = results[i].episode_returns;
    for (std::size_t k = er.size() - std::min(cfg.final_window, er.size()); k < er.size(); ++k)
      tail.push_back(er[k]);
    per_seed.push_back(json{{"seed", seeds[i]},
                            {"final_return_mean", fin},
                            {"final_return_std", std_of(tail)},
                            {"episodes", results[i].episode_returns.size()},
                            {"mean_ms_per_step", results[i].mean_ms_per_step},
                            {"csv", csv_name}});
  }
  json summary{{"provenance", provenance(cfg, algo, "train")},
               {"per_seed", per_seed},
               {"final_return_mean", mean_of(finals)},
               {"final_return_std", std_of(finals)},
               {"mean_ms_per_step", mean_of(ms)}};
  const fs::path summary_path =
      fs::path(cfg.out) / (cfg.algo + "_" + cfg.env + "_" + tag + "_summary.json");
  std::ofstream(summary_path) << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

struct Shape {
  std::size_t obs_dim, act_dim;
};

Shape resolve_shape(const ExperimentConfig& cfg) {
  if (cfg.obs_dim > 0 && cfg.act_dim > 0) return {cfg.obs_dim, cfg.act_dim};
  if (!cfg.shape.empty()) {
    if (cfg.shape == "walker2d" || cfg.shape == "halfcheetah") return {17, 6};
    if (cfg.shape == "ant") return {111, 8};
    if (cfg.shape == "humanoid") return {376, 17};
    throw std::invalid_argument("unknown shape '" + cfg.shape +
                                "' (walker2d|halfcheetah|ant|humanoid)");
  }
  const auto env = qrl::make_env(cfg.env, 0);
  return {env->spec().obs_dim, env->spec().act_dim};
}

int cmd_report_memory(const ExperimentConfig& cfg) {
  const qrl::AlgoKind algo = qrl::algo_kind_from_string(cfg.algo);
  const Shape shape = resolve_shape(cfg);

  qrl::MemoryReportConfig mc;
  mc.algo = algo;
  mc.obs_dim = shape.obs_dim;
  mc.act_dim = shape.act_dim;
  mc.buffer_entries = cfg.entries > 0 ? cfg.entries
                                      : (algo == qrl::AlgoKind::ppo ? 2048 : cfg.buffer_size);
  mc.float_bytes = cfg.float_bytes;
  if (cfg.layout == "full") mc.layout = qrl::BufferLayout::full;
  else if (cfg.layout == "sar") mc.layout = qrl::BufferLayout::sar;
  else throw std::invalid_argument("unknown layout '" + cfg.layout + "' (full|sar)");

  const qrl::MemoryReport baseline = qrl::memory_report(mc);
  mc.scheme = qrl::make_scheme(cfg.bound, resolved_decimals(cfg, algo));
  const qrl::MemoryReport quantized = qrl::memory_report(mc);

  json out{{"config",
            {{"algo", cfg.algo},
             {"obs_dim", shape.obs_dim},
             {"act_dim", shape.act_dim},
             {"entries", mc.buffer_entries},
             {"bound", cfg.bound},
             {"m", resolved_decimals(cfg, algo)},
             {"total_bits", mc.scheme->total_bits},
             {"float_bytes", cfg.float_bytes},
             {"layout", cfg.layout}}},
           {"baseline", json::parse(baseline.to_json_string())},
           {"quantized", json::parse(quantized.to_json_string())},
           {"reduction_ratio", quantized.reduction_ratio}};
  const std::string text = out.dump(2);
  if (cfg.out != "." && !cfg.out.empty()) {
    fs::path p(cfg.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream(p) << text << '\n';
  }
  std::cout << text << std::endl;
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg) {
  if (cfg.steps == 0) throw std::invalid_argument("bench: insufficient samples (steps == 0)");
  const qrl::AlgoKind algo = qrl::algo_kind_from_string(cfg.algo);

  ExperimentConfig base = cfg;
  base.quantize = false;
  ExperimentConfig quant = cfg;
  quant.quantize = true;

  const qrl::TrainResult rb = qrl::train(make_train_options(base, algo, cfg.bench_seed));
  const qrl::TrainResult rq = qrl::train(make_train_options(quant, algo, cfg.bench_seed));

  const double factor = rq.mean_ms_per_step / rb.mean_ms_per_step;
  const double factor_3dp = std::round(factor * 1000.0) / 1000.0;
  json out{{"config", provenance(cfg, algo, "bench")},
           {"seed", cfg.bench_seed},
           {"steps", cfg.steps},
           {"ms_per_step_baseline", rb.mean_ms_per_step},
           {"ms_per_step_quantized", rq.mean_ms_per_step},
           {"relative_factor", factor_3dp}};
  const std::string text = out.dump(2);
  if (cfg.out != "." && !cfg.out.empty()) {
    fs::path p(cfg.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream(p) << text << '\n';
  }
  std::cout << text << std::endl;
  return 0;
}

void add_common_flags(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--algo", cfg.algo, "Algorithm: ppo|sac");
  cmd->add_option("--env", cfg.env, "Environment: pendulum|reacher");
  cmd->add_option("--steps", cfg.steps, "Total environment steps");
  cmd->add_flag("--quantize", cfg.quantize, "Quantize buffered observations");
  cmd->add_option("--bound", cfg.bound, "Clamp bound (default 127)");
  cmd->add_option("--m", cfg.m, "Decimal places (default 1 for ppo, 2 for sac)");
  cmd->add_option("--buffer-size", cfg.buffer_size, "Replay buffer capacity (sac)");
  cmd->add_option("--float-bytes", cfg.float_bytes, "Full-precision element width: 4|8");
  cmd->add_option("--out", cfg.out, "Output directory (train) or file (report/bench)");
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  // --config is applied before flag parsing so flags win
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
      }
    }
  }

  CLI::App app{"Quantized observation storage for off- and on-policy RL training"};
  app.require_subcommand(1);
  std::string config_path;

  CLI::App* train_cmd = app.add_subcommand("train", "Train and emit learning-curve CSVs");
  add_common_flags(train_cmd, cfg);
  train_cmd->add_option("--seeds", cfg.seeds, "Seed list: 0..4 or 0,1,2");
  train_cmd->add_option("--jobs", cfg.jobs, "Parallel seed workers (0 = auto)");
  train_cmd->add_option("--final-window", cfg.final_window, "Episodes in the final-return mean");
  train_cmd->add_option("--config", config_path, "JSON config file (flags override)");

  CLI::App* report_cmd =
      app.add_subcommand("report-memory", "Memory breakdown, baseline vs quantized");
  add_common_flags(report_cmd, cfg);
  report_cmd->add_option("--shape", cfg.shape, "walker2d|halfcheetah|ant|humanoid");
  report_cmd->add_option("--obs-dim", cfg.obs_dim, "Observation dimension");
  report_cmd->add_option("--act-dim", cfg.act_dim, "Action dimension");
  report_cmd->add_option("--entries", cfg.entries, "Buffer entries (default: 2048 ppo, buffer-size sac)");
  report_cmd->add_option("--layout", cfg.layout, "Accounted entry fields: full|sar");
  report_cmd->add_option("--config", config_path, "JSON config file (flags override)");

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Per-step wall-clock, quantized vs baseline");
  add_common_flags(bench_cmd, cfg);
  bench_cmd->add_option("--seed", cfg.bench_seed, "Seed for both arms");
  bench_cmd->add_option("--config", config_path, "JSON config file (flags override)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(cfg);
    if (report_cmd->parsed()) return cmd_report_memory(cfg);
    if (bench_cmd->parsed()) return cmd_bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
