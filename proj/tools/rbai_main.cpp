#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbai/environments.hpp"
#include "rbai/experiment.hpp"
#include "rbai/serialization.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust best-arm identification experiments"};
  app.require_subcommand(1);

  // --- run ------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run strategy x instance sweeps");
  std::string config_path;
  std::string experiment;
  std::vector<std::string> strategies;
  std::vector<int> sweep;
  int reps = 20;
  double delta = 0.05, eps = 0.1;
  std::uint64_t seed = 0;
  std::string out_dir;
  int jobs = 0;
  long max_pulls = 10000000;
  std::string schedule;
  int n_y = 5;
  double alpha = 0.05;
  int sphere_dim = 10;
  std::string run_instance_path;
  double gamma_oracle = 1.1, gamma_static = 1.3;
  int fw_max_iters = 5000;
  double fw_tol = 1e-3;

  run->add_option("--config", config_path, "JSON config file; flags override its fields");
  run->add_option("--experiment", experiment, "irrelevant_dims, unit_sphere, or from_file");
  run->add_option("--strategies", strategies, "subset of oracle,static,rage")
      ->delimiter(',');
  run->add_option("--sweep", sweep, "d values (n_arms for unit_sphere)")->delimiter(',');
  run->add_option("--reps", reps, "replications per cell");
  run->add_option("--delta", delta, "failure probability");
  run->add_option("--eps", eps, "rounding slack");
  run->add_option("--seed", seed, "base seed; run r uses seed + r");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  run->add_option("--max-pulls", max_pulls, "abort budget per run");
  run->add_option("--rage-delta-schedule", schedule, "alg1 or squared")
      ->check(CLI::IsMember({"alg1", "squared"}));
  run->add_option("--n-y", n_y, "adversary actions per arm (generators)");
  run->add_option("--alpha", alpha, "adversary radius (unit_sphere)");
  run->add_option("--sphere-dim", sphere_dim, "dimension for unit_sphere");
  run->add_option("--instance", run_instance_path, "instance JSON (from_file)");
  run->add_option("--gamma-oracle", gamma_oracle, "oracle phase growth factor");
  run->add_option("--gamma-static", gamma_static, "static phase growth factor");
  run->add_option("--fw-max-iters", fw_max_iters, "design solver iteration cap");
  run->add_option("--fw-tol", fw_tol, "design solver stopping tolerance");

  run->callback([&]() {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) j = read_json_file(config_path);
    if (run->count("--experiment")) j["experiment"] = experiment;
    if (run->count("--strategies")) j["strategies"] = strategies;
    if (run->count("--sweep")) j["sweep"] = sweep;
    if (run->count("--reps")) j["replications"] = reps;
    if (run->count("--delta")) j["delta"] = delta;
    if (run->count("--eps")) j["eps"] = eps;
    if (run->count("--seed")) j["base_seed"] = seed;
    if (run->count("--out")) j["out_dir"] = out_dir;
    if (run->count("--jobs")) j["jobs"] = jobs;
    if (run->count("--max-pulls")) j["max_pulls"] = max_pulls;
    if (run->count("--rage-delta-schedule")) j["rage_delta_schedule"] = schedule;
    if (run->count("--n-y")) j["n_y"] = n_y;
    if (run->count("--alpha")) j["alpha"] = alpha;
    if (run->count("--sphere-dim")) j["sphere_dim"] = sphere_dim;
    if (run->count("--instance")) j["instance_path"] = run_instance_path;
    if (run->count("--gamma-oracle")) j["gamma_oracle"] = gamma_oracle;
    if (run->count("--gamma-static")) j["gamma_static"] = gamma_static;
    if (run->count("--fw-max-iters")) j["fw_max_iters"] = fw_max_iters;
    if (run->count("--fw-tol")) j["fw_tol"] = fw_tol;

    const rbai::ExperimentConfig config = rbai::config_from_json(j);
    if (config.out_dir.empty()) {
      throw CLI::ValidationError("--out (or out_dir in the config file) is required");
    }
    const std::vector<rbai::RunRow> rows = rbai::execute(config);
    rbai::write_outputs(config, rows);
    std::cout << rbai::summarize(rows).dump(2) << "\n";
  });

  // --- complexity -------------------------------------------------------
  auto* cplx = app.add_subcommand("complexity", "Hardness report for an instance file");
  std::string cplx_instance;
  double cplx_delta = 0.05;
  int cplx_iters = 5000;
  double cplx_tol = 1e-3;
  std::string cplx_out;
  cplx->add_option("instance", cplx_instance, "instance JSON file")->required();
  cplx->add_option("--delta", cplx_delta, "failure probability");
  cplx->add_option("--fw-max-iters", cplx_iters, "design solver iteration cap");
  cplx->add_option("--fw-tol", cplx_tol, "design solver stopping tolerance");
  cplx->add_option("--out", cplx_out, "write the report here instead of stdout");
  cplx->callback([&]() {
    const rbai::Instance inst = rbai::load_instance(cplx_instance);
    const nlohmann::json report =
        rbai::complexity_report(inst, cplx_delta, cplx_iters, cplx_tol);
    if (cplx_out.empty()) {
      std::cout << report.dump(2) << "\n";
    } else {
      rbai::save_json(report, cplx_out);
    }
  });

  // --- validate -----------------------------------------------------------
  auto* val = app.add_subcommand("validate", "Check an instance file's invariants");
  std::string val_instance;
  val->add_option("instance", val_instance, "instance JSON file")->required();
  val->callback([&]() {
    const nlohmann::json report = rbai::validate_instance(read_json_file(val_instance));
    std::cout << report.dump(2) << "\n";
    if (!report.at("ok").get<bool>()) throw CLI::RuntimeError(1);
  });

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Write a generated instance as JSON");
  std::string gen_experiment = "irrelevant_dims";
  int gen_d = 5;
  int gen_arms = 10;
  int gen_ny = 5;
  double gen_alpha = 0.05;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--experiment", gen_experiment, "irrelevant_dims or unit_sphere")
      ->check(CLI::IsMember({"irrelevant_dims", "unit_sphere"}));
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--n-arms", gen_arms, "arm count (unit_sphere)");
  gen->add_option("--n-y", gen_ny, "adversary actions per arm");
  gen->add_option("--alpha", gen_alpha, "adversary radius (unit_sphere)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file")->required();
  gen->callback([&]() {
    const rbai::Instance inst =
        gen_experiment == "unit_sphere"
            ? rbai::make_unit_sphere(gen_d, gen_arms, gen_ny, gen_alpha, gen_seed)
            : rbai::make_irrelevant_dims(gen_d, gen_ny, gen_seed);
    rbai::save_json(rbai::to_json(inst), gen_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
