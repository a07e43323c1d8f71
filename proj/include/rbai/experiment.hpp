#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbai/algorithms.hpp"
#include "rbai/instance.hpp"

namespace rbai {

enum class ExperimentKind { irrelevant_dims, unit_sphere, from_file };
enum class Strategy { oracle, robust_static, robust_rage };

std::string to_string(ExperimentKind kind);
std::string to_string(Strategy strategy);
ExperimentKind experiment_from_string(const std::string& name);
Strategy strategy_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::irrelevant_dims;
  std::vector<Strategy> strategies = {Strategy::oracle, Strategy::robust_static,
                                      Strategy::robust_rage};
  std::vector<int> sweep = {5, 10, 15, 20};  // d values (or n_arms for unit_sphere)
  int replications = 20;
  double delta = 0.05;
  double eps = 0.1;
  std::uint64_t base_seed = 0;
  std::string out_dir;
  int jobs = 0;  // 0: all available cores
  long max_pulls = 10000000;
  bool rage_squared_delta = false;

  // Generator knobs.
  int n_y = 5;
  double alpha = 0.05;
  int sphere_dim = 10;
  std::string instance_path;  // from_file only

  // Strategy knobs.
  double gamma_oracle = 1.1;
  double gamma_static = 1.3;
  int fw_max_iters = 5000;
  double fw_tol = 1e-3;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// One completed run, in deterministic (sweep value, strategy, replication)
// order regardless of worker scheduling.
struct RunRow {
  std::string experiment;
  std::string strategy;
  int d = 0;
  int n_arms = 0;
  int n_y = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double eps = 0.0;
  int sweep_value = 0;
  RunResult result;
};

// Runs the full sweep in memory. Replications are spread over a worker pool;
// every run's seed is base_seed + replication index, and the instance for a
// sweep value is fixed so all strategies see the same family.
std::vector<RunRow> execute(const ExperimentConfig& config);

std::string csv_header();
std::string csv_line(const RunRow& row);

// Writes results.csv (one timestamp comment line, then the schema header,
// then rows), summary.json (per-cell stats), traces.json (full phase records).
void write_outputs(const ExperimentConfig& config, const std::vector<RunRow>& rows);

// Per-cell mean/median/std of total_pulls plus correctness and abort rates.
nlohmann::json summarize(const std::vector<RunRow>& rows);

// {h_r, worst_case_bound, oracle_predicted_n, lower_bound} for one instance.
nlohmann::json complexity_report(const Instance& instance, double delta,
                                 int fw_max_iters = 5000, double fw_tol = 1e-3);

// Structural diagnostics for an instance file: either ok plus gap/geometry
// stats, or the validation failure.
nlohmann::json validate_instance(const nlohmann::json& instance_json);

}  // namespace rbai
