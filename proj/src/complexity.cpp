#include "rbai/complexity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbai {

double h_r(const Instance& instance, int fw_max_iters, double fw_tol) {
  const DesignObjective objective = DesignObjective::oracle(instance);
  return solve_design(objective, instance, fw_max_iters, fw_tol).value;
}

double worst_case_bound(const Instance& instance) {
  if (instance.n_arms() < 2) return std::numeric_limits<double>::infinity();
  const int best = best_robust_arm(instance);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int arm = 0; arm < instance.n_arms(); ++arm) {
    if (arm == best) continue;
    min_gap = std::min(min_gap, robust_gap(instance, best, arm));
  }
  return 4.0 * instance.dim() / (min_gap * min_gap);
}

double lower_bound_value(const Instance& instance, const Design& design, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double scale = 2.0 * std::log(1.0 / (2.0 * delta));
  if (scale == 0.0) return 0.0;  // delta = 1/2 zeroes the bound even at a singular design
  const double value = objective_value(DesignObjective::oracle(instance), instance, design);
  return scale * value;
}

double oracle_predicted_n(const Instance& instance, double delta, int fw_max_iters,
                          double fw_tol) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double m = static_cast<double>(instance.n_diffs());
  return 2.0 * std::log(m * m / delta) * h_r(instance, fw_max_iters, fw_tol);
}

}  // namespace rbai
