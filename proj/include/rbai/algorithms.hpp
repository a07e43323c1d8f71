#pragma once

#include <cstdint>
#include <vector>

#include "rbai/design.hpp"
#include "rbai/estimation.hpp"
#include "rbai/instance.hpp"

namespace rbai {

struct StrategyConfig {
  double delta = 0.05;     // target failure probability
  double eps = 0.1;        // rounding slack
  double gamma = 1.3;      // phased budget growth factor (static 1.3, oracle 1.1)
  int fw_max_iters = 5000;
  double fw_tol = 1e-3;
  std::uint64_t seed = 0;
  long max_pulls = 10000000;
  // false: delta_t = delta / t^2.  true: delta_t = delta^2 / t^2.
  bool rage_squared_delta = false;
};

struct PhaseRecord {
  int t = 0;
  std::vector<int> active_arms;
  double design_value = 0.0;
  long n_t = 0;  // pulls executed in this phase
  double delta_t = 0.0;
};

struct RunResult {
  int recommended_arm = -1;
  long total_pulls = 0;
  bool correct = false;
  bool aborted = false;  // max_pulls reached before the stopping rule fired
  std::vector<PhaseRecord> phases;
};

// Arm with the largest empirical robust value; ties go to the lowest id.
int recommend(const Instance& instance, const Vector& theta_hat);

// Some arm x certifies itself: for every y in Y(x) and competitor pair the
// confidence width at 2 log(|Z|^2/delta) is at most the empirical quad gap.
bool stopping_condition_static(const Instance& instance, const Estimator& estimator,
                               double delta);

// Same certificate for the true best arm, using true gaps instead of
// empirical ones.
bool stopping_condition_oracle(const Instance& instance, const Estimator& estimator,
                               double delta);

// Phased static allocation from the worst-case design; stops on the
// empirical certificate.
RunResult run_static(const Instance& instance, const StrategyConfig& config);

// Phased allocation from the gap-weighted design around the true best arm;
// stops once the true-gap certificate holds.
RunResult run_oracle(const Instance& instance, const StrategyConfig& config);

// Phase-elimination: per phase solve the pairwise design on the active set,
// pull N_t = max(ceil(2^{2t+1} rho_t (1+eps) log(|Z|^2/delta_t)), r(eps))
// samples, re-estimate from this phase only, and drop every arm some rival
// dominates at width sqrt(2 log(|Z|^2/delta_t)). Returns the survivor.
RunResult run_rage(const Instance& instance, const StrategyConfig& config);

}  // namespace rbai
