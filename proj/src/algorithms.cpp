#include "rbai/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "rbai/environments.hpp"
#include "rbai/errors.hpp"

namespace rbai {

namespace {

void check_config(const StrategyConfig& config) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(config.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(config.gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (config.max_pulls < 1) throw std::invalid_argument("max_pulls must be positive");
  if (config.fw_max_iters < 1) throw std::invalid_argument("fw_max_iters must be positive");
}

// Does `arm` certify itself at the given log term: for each of its actions
// and each competitor there is a rival action whose width is at most the
// value margin in `dots`?
bool certified(const Instance& instance, const Matrix& gram, const Vector& dots,
               double log_term, int arm) {
  const auto [fx, lx] = instance.diff_range(arm);
  for (int i = fx; i < lx; ++i) {
    for (int xp = 0; xp < instance.n_arms(); ++xp) {
      const auto [fp, lp] = instance.diff_range(xp);
      bool found = false;
      for (int j = fp; j < lp; ++j) {
        const double q =
            std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
        if (std::sqrt(q * log_term) <= dots(i) - dots(j)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

RunResult run_phased(const Instance& instance, const StrategyConfig& config,
                     bool oracle_mode) {
  check_config(config);
  const auto& diffs = instance.diffs();
  const int m = instance.n_diffs();

  const DesignObjective objective = oracle_mode
                                        ? DesignObjective::oracle(instance)
                                        : DesignObjective::g_allocation();
  const SolveResult sol =
      solve_design(objective, instance, config.fw_max_iters, config.fw_tol);
  const long floor_n = rounding_floor(sol.design, config.eps);

  RewardSampler sampler(instance, config.seed);
  Estimator est(instance.dim());
  std::vector<long> have(static_cast<std::size_t>(m), 0);
  std::vector<int> all_arms(static_cast<std::size_t>(instance.n_arms()));
  std::iota(all_arms.begin(), all_arms.end(), 0);

  RunResult out;
  long prev_budget = 0;
  for (int t = 1;; ++t) {
    const double raw = std::pow(config.gamma, t);
    long budget = raw >= 9.0e18 ? config.max_pulls
                                : std::max(static_cast<long>(std::ceil(raw)), floor_n);
    const bool at_cap = budget >= config.max_pulls;
    if (at_cap) budget = config.max_pulls;
    if (budget < floor_n) {
      // Pull cap sits below the smallest roundable budget; nothing can run.
      out.aborted = true;
      out.recommended_arm = 0;
      break;
    }
    if (budget == prev_budget) continue;  // several t can map to one total
    prev_budget = budget;

    const std::vector<long> counts = round_design(sol.design, budget, config.eps);
    long added = 0;
    for (int k = 0; k < m; ++k) {
      const long want = counts[static_cast<std::size_t>(k)] -
                        have[static_cast<std::size_t>(k)];
      if (want <= 0) continue;  // per-direction totals may regress; never un-pull
      double reward_sum = 0.0;
      for (long r = 0; r < want; ++r) {
        reward_sum += sampler.pull(diffs[static_cast<std::size_t>(k)]);
      }
      est.update_batch(diffs[static_cast<std::size_t>(k)].z, want, reward_sum);
      have[static_cast<std::size_t>(k)] += want;
      added += want;
    }
    out.total_pulls += added;
    out.phases.push_back({t, all_arms, sol.value, added, config.delta});

    const bool stop = oracle_mode
                          ? stopping_condition_oracle(instance, est, config.delta)
                          : stopping_condition_static(instance, est, config.delta);
    if (stop) {
      out.recommended_arm = recommend(instance, est.theta_hat());
      break;
    }
    if (at_cap) {
      out.aborted = true;
      out.recommended_arm = recommend(instance, est.theta_hat());
      break;
    }
  }
  out.correct = out.recommended_arm == best_robust_arm(instance);
  return out;
}

}  // namespace

int recommend(const Instance& instance, const Vector& theta_hat) {
  const std::vector<double> values = robust_values_under(instance, theta_hat);
  int best = 0;
  for (int k = 1; k < instance.n_arms(); ++k) {
    if (values[static_cast<std::size_t>(k)] > values[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  return best;
}

bool stopping_condition_static(const Instance& instance, const Estimator& estimator,
                               double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const int m = instance.n_diffs();
  Matrix gram;
  Vector dots;
  try {
    const FactoredInverse inv(estimator.gram());
    gram = inv_gram(inv, instance.diff_matrix());
    const Vector theta_hat = inv.solve(estimator.moment());
    dots = instance.diff_matrix().transpose() * theta_hat;
  } catch (const SingularDesign&) {
    return false;
  }
  const double log_term = 2.0 * std::log(static_cast<double>(m) * m / delta);
  for (int arm = 0; arm < instance.n_arms(); ++arm) {
    if (certified(instance, gram, dots, log_term, arm)) return true;
  }
  return false;
}

bool stopping_condition_oracle(const Instance& instance, const Estimator& estimator,
                               double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const int m = instance.n_diffs();
  Matrix gram;
  try {
    const FactoredInverse inv(estimator.gram());
    gram = inv_gram(inv, instance.diff_matrix());
  } catch (const SingularDesign&) {
    return false;
  }
  const Vector dots = instance.diff_matrix().transpose() * instance.theta();
  const double log_term = 2.0 * std::log(static_cast<double>(m) * m / delta);
  return certified(instance, gram, dots, log_term, best_robust_arm(instance));
}

RunResult run_static(const Instance& instance, const StrategyConfig& config) {
  return run_phased(instance, config, /*oracle_mode=*/false);
}

RunResult run_oracle(const Instance& instance, const StrategyConfig& config) {
  return run_phased(instance, config, /*oracle_mode=*/true);
}

RunResult run_rage(const Instance& instance, const StrategyConfig& config) {
  check_config(config);
  const auto& diffs = instance.diffs();
  const int m = instance.n_diffs();
  const Matrix& z = instance.diff_matrix();

  RewardSampler sampler(instance, config.seed);
  std::vector<int> active(static_cast<std::size_t>(instance.n_arms()));
  std::iota(active.begin(), active.end(), 0);

  RunResult out;
  Vector theta_last;
  bool have_theta = false;
  // Re-solving for an unchanged active set would repeat the same Frank-Wolfe
  // run; phases that eliminate nothing reuse the cached design.
  std::map<std::vector<int>, SolveResult> solved;

  for (int t = 1; active.size() > 1; ++t) {
    const double tt = static_cast<double>(t) * t;
    const double delta_t = config.rage_squared_delta
                               ? config.delta * config.delta / tt
                               : config.delta / tt;
    auto it = solved.find(active);
    if (it == solved.end()) {
      it = solved
               .emplace(active, solve_design(DesignObjective::rage_phase(active), instance,
                                             config.fw_max_iters, config.fw_tol))
               .first;
    }
    const SolveResult& sol = it->second;
    const double rho = sol.value;
    const double log_term = std::log(static_cast<double>(m) * m / delta_t);
    const long floor_n = rounding_floor(sol.design, config.eps);

    const double raw = std::ldexp(1.0, 2 * t + 1) * rho * (1.0 + config.eps) * log_term;
    long n_t = raw >= 9.0e18 ? config.max_pulls
                             : std::max(static_cast<long>(std::ceil(raw)), floor_n);
    if (out.total_pulls + n_t > config.max_pulls) {
      out.aborted = true;
      out.recommended_arm = have_theta ? recommend(instance, theta_last) : active.front();
      break;
    }

    const std::vector<long> counts = round_design(sol.design, n_t, config.eps);
    Estimator est(instance.dim());
    for (int k = 0; k < m; ++k) {
      const long c = counts[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      double reward_sum = 0.0;
      for (long r = 0; r < c; ++r) {
        reward_sum += sampler.pull(diffs[static_cast<std::size_t>(k)]);
      }
      est.update_batch(diffs[static_cast<std::size_t>(k)].z, c, reward_sum);
    }
    out.total_pulls += n_t;

    const Vector theta_t = est.theta_hat();
    theta_last = theta_t;
    have_theta = true;
    out.phases.push_back({t, active, rho, n_t, delta_t});

    const FactoredInverse inv(est.gram());
    const Matrix gram = inv_gram(inv, z);
    const Vector dots = z.transpose() * theta_t;
    const double width_factor = std::sqrt(2.0 * log_term);

    // Drop x when some rival x' dominates it: every action of x' beats, with
    // room to spare, some action of x. Strict inequality keeps the self-pair
    // (width 0 against gap 0) from eliminating anything.
    std::vector<int> survivors;
    for (int x : active) {
      const auto [fx, lx] = instance.diff_range(x);
      bool removed = false;
      for (int xp : active) {
        const auto [fp, lp] = instance.diff_range(xp);
        bool dominates = true;
        for (int j = fp; j < lp && dominates; ++j) {
          bool found = false;
          for (int i = fx; i < lx; ++i) {
            const double q =
                std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
            if (std::sqrt(q) * width_factor < dots(j) - dots(i)) {
              found = true;
              break;
            }
          }
          if (!found) dominates = false;
        }
        if (dominates) {
          removed = true;
          break;
        }
      }
      if (!removed) survivors.push_back(x);
    }
    active = std::move(survivors);

    if (active.empty()) {
      // Unreachable: the arm with the largest empirical robust value cannot
      // be dominated (domination forces a strictly larger robust value).
      // Kept as a defensive fallback.
      out.recommended_arm = recommend(instance, theta_t);
      break;
    }
  }

  if (out.recommended_arm < 0 && active.size() == 1) {
    out.recommended_arm = active.front();
  }
  out.correct = out.recommended_arm == best_robust_arm(instance);
  return out;
}

}  // namespace rbai
