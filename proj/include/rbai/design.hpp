#pragma once

#include <vector>

#include "rbai/estimation.hpp"
#include "rbai/instance.hpp"

namespace rbai {

// Weights below this threshold count as off-support for rounding and r(eps).
inline constexpr double kSupportTol = 1e-9;

// A sampling distribution over the diff_set enumeration.
struct Design {
  Vector weights;  // length |Z|, non-negative, sums to 1
};

// sum_z lambda_z z z^T for the given instance's difference vectors.
Matrix design_matrix(const Instance& instance, const Design& design);

enum class ObjectiveKind { g_alloc, oracle, rage_phase };

// A min-max design criterion. g_alloc: max_z ||z||^2_{A^{-1}}. oracle:
// max over y in Y(x*), x' != x* of the min over y' in Y(x') of
// ||x*-y-(x'-y')||^2_{A^{-1}} / gap^2, gaps <= 0 excluded. rage_phase:
// max over x,x' in the active set, y in Y(x) of the min over y' in Y(x')
// of ||x-y-(x'-y')||^2_{A^{-1}}.
struct DesignObjective {
  ObjectiveKind kind = ObjectiveKind::g_alloc;
  std::vector<int> active_arms;  // rage_phase only
  int best_arm = -1;             // oracle only
  Matrix gaps;                   // oracle only: |Y(x*)| x |Z| true quadruple gaps

  static DesignObjective g_allocation();
  // Reads the true theta; reserved for the oracle strategy and complexity
  // functionals.
  static DesignObjective oracle(const Instance& instance);
  static DesignObjective rage_phase(std::vector<int> active_arms);
};

// Criterion value at a design; +infinity when A_lambda is singular.
double objective_value(const DesignObjective& objective, const Instance& instance,
                       const Design& design);

struct SolveResult {
  Design design;
  double value = 0.0;
  int iterations = 0;
  // Best-so-far objective value after each iteration (monotone non-increasing).
  std::vector<double> checkpoints;
};

// Frank-Wolfe over the simplex from a uniform start. Linearizes at the
// criterion's active tuple, steps gamma_k = 2/(k+2) toward the best vertex,
// and stops when the best value's relative decrease over a 10-iteration
// window falls below tol while the current iterate sits within (1 + tol)
// of that best value (or at max_iters). Returns the best design seen.
SolveResult solve_design(const DesignObjective& objective, const Instance& instance,
                         int max_iters = 5000, double tol = 1e-3);

int support_size(const Design& design);

// Apportionment floor r(eps) = ceil(2 p / eps) for the design's support.
long rounding_floor(const Design& design, double eps);

// Efficient apportionment of n pulls: counts = ceil(lambda_z (n - p/2)) on the
// support, then decrement argmax (n_z - 1)/lambda_z or increment argmin
// n_z/lambda_z until the total is exactly n. Requires n >= r(eps).
std::vector<long> round_design(const Design& design, long n, double eps);

}  // namespace rbai
