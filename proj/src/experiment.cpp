#include "rbai/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "rbai/complexity.hpp"
#include "rbai/environments.hpp"
#include "rbai/serialization.hpp"

namespace rbai {

namespace {

// Shortest round-trip decimal form, so re-runs print identically everywhere.
std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int max_actions(const Instance& instance) {
  std::size_t n = 0;
  for (const AdversarySet& a : instance.adversaries()) n = std::max(n, a.actions.size());
  return static_cast<int>(n);
}

// Fixed per sweep value so every strategy and replication sees the same
// instance family.
std::uint64_t instance_seed(std::uint64_t base_seed, int sweep_value) {
  std::uint64_t state =
      base_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(sweep_value) + 1));
  return splitmix64(state);
}

struct Cell {
  int sweep_value = 0;
  Instance instance;
};

std::vector<Cell> build_cells(const ExperimentConfig& config) {
  if (config.sweep.empty()) throw std::invalid_argument("sweep must be non-empty");
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (config.strategies.empty()) throw std::invalid_argument("strategies must be non-empty");

  std::vector<Cell> cells;
  switch (config.experiment) {
    case ExperimentKind::irrelevant_dims:
      for (int d : config.sweep) {
        cells.push_back({d, make_irrelevant_dims(d, config.n_y,
                                                 instance_seed(config.base_seed, d))});
      }
      break;
    case ExperimentKind::unit_sphere:
      for (int n_arms : config.sweep) {
        cells.push_back({n_arms,
                         make_unit_sphere(config.sphere_dim, n_arms, config.n_y, config.alpha,
                                          instance_seed(config.base_seed, n_arms))});
      }
      break;
    case ExperimentKind::from_file: {
      if (config.instance_path.empty()) {
        throw std::invalid_argument("from_file experiment needs an instance path");
      }
      Instance inst = load_instance(config.instance_path);
      const int v = inst.dim();
      cells.push_back({v, std::move(inst)});
      break;
    }
  }
  return cells;
}

RunResult run_one(const Instance& instance, Strategy strategy,
                  const ExperimentConfig& config, std::uint64_t seed) {
  StrategyConfig sc;
  sc.delta = config.delta;
  sc.eps = config.eps;
  sc.seed = seed;
  sc.max_pulls = config.max_pulls;
  sc.rage_squared_delta = config.rage_squared_delta;
  sc.fw_max_iters = config.fw_max_iters;
  sc.fw_tol = config.fw_tol;
  switch (strategy) {
    case Strategy::oracle:
      sc.gamma = config.gamma_oracle;
      return run_oracle(instance, sc);
    case Strategy::robust_static:
      sc.gamma = config.gamma_static;
      return run_static(instance, sc);
    case Strategy::robust_rage:
      sc.gamma = config.gamma_static;  // unused by the phase schedule
      return run_rage(instance, sc);
  }
  throw std::logic_error("unknown strategy");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::irrelevant_dims: return "irrelevant_dims";
    case ExperimentKind::unit_sphere: return "unit_sphere";
    case ExperimentKind::from_file: return "from_file";
  }
  throw std::logic_error("unknown experiment kind");
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::oracle: return "oracle";
    case Strategy::robust_static: return "static";
    case Strategy::robust_rage: return "rage";
  }
  throw std::logic_error("unknown strategy");
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "irrelevant_dims") return ExperimentKind::irrelevant_dims;
  if (name == "unit_sphere") return ExperimentKind::unit_sphere;
  if (name == "from_file") return ExperimentKind::from_file;
  throw std::invalid_argument("unknown experiment: " + name);
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "oracle") return Strategy::oracle;
  if (name == "static") return Strategy::robust_static;
  if (name == "rage") return Strategy::robust_rage;
  throw std::invalid_argument("unknown strategy: " + name);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = experiment_from_string(j.at("experiment"));
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : j.at("strategies")) {
      c.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
  }
  if (j.contains("sweep")) c.sweep = j.at("sweep").get<std::vector<int>>();
  c.replications = j.value("replications", c.replications);
  c.delta = j.value("delta", c.delta);
  c.eps = j.value("eps", c.eps);
  c.base_seed = j.value("base_seed", c.base_seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.jobs = j.value("jobs", c.jobs);
  c.max_pulls = j.value("max_pulls", c.max_pulls);
  if (j.contains("rage_delta_schedule")) {
    const std::string s = j.at("rage_delta_schedule").get<std::string>();
    if (s == "alg1") c.rage_squared_delta = false;
    else if (s == "squared") c.rage_squared_delta = true;
    else throw std::invalid_argument("rage_delta_schedule must be alg1 or squared");
  }
  c.n_y = j.value("n_y", c.n_y);
  c.alpha = j.value("alpha", c.alpha);
  c.sphere_dim = j.value("sphere_dim", c.sphere_dim);
  c.instance_path = j.value("instance_path", c.instance_path);
  c.gamma_oracle = j.value("gamma_oracle", c.gamma_oracle);
  c.gamma_static = j.value("gamma_static", c.gamma_static);
  c.fw_max_iters = j.value("fw_max_iters", c.fw_max_iters);
  c.fw_tol = j.value("fw_tol", c.fw_tol);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json strategies = nlohmann::json::array();
  for (Strategy s : config.strategies) strategies.push_back(to_string(s));
  return {{"experiment", to_string(config.experiment)},
          {"strategies", std::move(strategies)},
          {"sweep", config.sweep},
          {"replications", config.replications},
          {"delta", config.delta},
          {"eps", config.eps},
          {"base_seed", config.base_seed},
          {"out_dir", config.out_dir},
          {"jobs", config.jobs},
          {"max_pulls", config.max_pulls},
          {"rage_delta_schedule", config.rage_squared_delta ? "squared" : "alg1"},
          {"n_y", config.n_y},
          {"alpha", config.alpha},
          {"sphere_dim", config.sphere_dim},
          {"instance_path", config.instance_path},
          {"gamma_oracle", config.gamma_oracle},
          {"gamma_static", config.gamma_static},
          {"fw_max_iters", config.fw_max_iters},
          {"fw_tol", config.fw_tol}};
}

std::vector<RunRow> execute(const ExperimentConfig& config) {
  const std::vector<Cell> cells = build_cells(config);
  const std::size_t per_cell =
      config.strategies.size() * static_cast<std::size_t>(config.replications);
  const std::size_t n_tasks = cells.size() * per_cell;
  std::vector<RunRow> rows(n_tasks);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
      if (failed.load()) return;
      const std::size_t ci = i / per_cell;
      const std::size_t rest = i % per_cell;
      const std::size_t si = rest / static_cast<std::size_t>(config.replications);
      const int rep = static_cast<int>(rest % static_cast<std::size_t>(config.replications));
      const Cell& cell = cells[ci];
      const Strategy strategy = config.strategies[si];
      const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(rep);
      try {
        RunRow row;
        row.experiment = to_string(config.experiment);
        row.strategy = to_string(strategy);
        row.d = cell.instance.dim();
        row.n_arms = cell.instance.n_arms();
        row.n_y = max_actions(cell.instance);
        row.seed = seed;
        row.delta = config.delta;
        row.eps = config.eps;
        row.sweep_value = cell.sweep_value;
        row.result = run_one(cell.instance, strategy, config, seed);
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  int jobs = config.jobs > 0 ? config.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, static_cast<int>(n_tasks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

std::string csv_header() {
  return "strategy,experiment,d,n_arms,n_y,seed,delta,eps,total_pulls,phases,correct,aborted";
}

std::string csv_line(const RunRow& row) {
  std::string line;
  line += row.strategy;
  line += ',';
  line += row.experiment;
  line += ',';
  line += std::to_string(row.d);
  line += ',';
  line += std::to_string(row.n_arms);
  line += ',';
  line += std::to_string(row.n_y);
  line += ',';
  line += std::to_string(row.seed);
  line += ',';
  line += format_double(row.delta);
  line += ',';
  line += format_double(row.eps);
  line += ',';
  line += std::to_string(row.result.total_pulls);
  line += ',';
  line += std::to_string(row.result.phases.size());
  line += ',';
  line += row.result.correct ? "true" : "false";
  line += ',';
  line += row.result.aborted ? "true" : "false";
  return line;
}

nlohmann::json summarize(const std::vector<RunRow>& rows) {
  std::vector<std::tuple<std::string, int, std::string>> order;
  std::map<std::tuple<std::string, int, std::string>, std::vector<const RunRow*>> groups;
  for (const RunRow& row : rows) {
    const auto key = std::make_tuple(row.experiment, row.sweep_value, row.strategy);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    std::vector<double> pulls;
    int correct = 0;
    int aborted = 0;
    for (const RunRow* r : members) {
      pulls.push_back(static_cast<double>(r->result.total_pulls));
      correct += r->result.correct ? 1 : 0;
      aborted += r->result.aborted ? 1 : 0;
    }
    cells.push_back({{"experiment", std::get<0>(key)},
                     {"sweep_value", std::get<1>(key)},
                     {"strategy", std::get<2>(key)},
                     {"runs", members.size()},
                     {"correct_rate", static_cast<double>(correct) / members.size()},
                     {"aborted", aborted},
                     {"total_pulls",
                      {{"mean", mean_of(pulls)},
                       {"median", median_of(pulls)},
                       {"std", sample_std(pulls)}}}});
  }
  return cells;
}

void write_outputs(const ExperimentConfig& config, const std::vector<RunRow>& rows) {
  if (config.out_dir.empty()) throw std::invalid_argument("out_dir must be set");
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path dir(config.out_dir);

  {
    std::ofstream csv(dir / "results.csv");
    if (!csv) throw std::runtime_error("cannot write results.csv in " + config.out_dir);
    csv << "# created " << iso_timestamp_utc() << " prng=" << kPrngId << "\n";
    csv << csv_header() << "\n";
    for (const RunRow& row : rows) csv << csv_line(row) << "\n";
  }

  nlohmann::json summary;
  summary["created"] = iso_timestamp_utc();
  summary["prng"] = kPrngId;
  summary["config"] = to_json(config);
  summary["cells"] = summarize(rows);
  save_json(summary, (dir / "summary.json").string());

  nlohmann::json traces = nlohmann::json::array();
  for (const RunRow& row : rows) {
    nlohmann::json t;
    t["strategy"] = row.strategy;
    t["experiment"] = row.experiment;
    t["sweep_value"] = row.sweep_value;
    t["seed"] = row.seed;
    t["result"] = to_json(row.result);
    traces.push_back(std::move(t));
  }
  save_json(traces, (dir / "traces.json").string());
}

nlohmann::json complexity_report(const Instance& instance, double delta, int fw_max_iters,
                                 double fw_tol) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const SolveResult sol =
      solve_design(DesignObjective::oracle(instance), instance, fw_max_iters, fw_tol);
  const double m = static_cast<double>(instance.n_diffs());
  return {{"dim", instance.dim()},
          {"n_arms", instance.n_arms()},
          {"n_diffs", instance.n_diffs()},
          {"delta", delta},
          {"h_r", sol.value},
          {"worst_case_bound", worst_case_bound(instance)},
          {"oracle_predicted_n", 2.0 * std::log(m * m / delta) * sol.value},
          {"lower_bound", 2.0 * std::log(1.0 / (2.0 * delta)) * sol.value}};
}

nlohmann::json validate_instance(const nlohmann::json& instance_json) {
  nlohmann::json out;
  try {
    const Instance inst = instance_from_json(instance_json);
    out["ok"] = true;
    out["dim"] = inst.dim();
    out["n_arms"] = inst.n_arms();
    out["n_diffs"] = inst.n_diffs();
    out["noise_std"] = inst.noise_std();
    out["feature_bound"] = inst.feature_bound();
    const int best = best_robust_arm(inst);
    out["best_arm"] = best;
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json gaps = nlohmann::json::array();
    double min_gap = std::numeric_limits<double>::infinity();
    for (int a = 0; a < inst.n_arms(); ++a) {
      const double v = robust_value(inst, a);
      values.push_back(v);
      if (a != best) {
        const double g = robust_gap(inst, best, a);
        gaps.push_back({{"arm", a}, {"gap", g}});
        min_gap = std::min(min_gap, g);
      }
    }
    out["robust_values"] = std::move(values);
    out["gaps"] = std::move(gaps);
    if (inst.n_arms() > 1) out["min_gap"] = min_gap;
  } catch (const std::exception& e) {
    out["ok"] = false;
    out["problems"] = nlohmann::json::array({e.what()});
  }
  return out;
}

}  // namespace rbai
