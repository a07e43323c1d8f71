#pragma once

#include "rbai/design.hpp"
#include "rbai/instance.hpp"

namespace rbai {

// Instance hardness: the optimal value of the gap-weighted design criterion
// around the true best arm.
double h_r(const Instance& instance, int fw_max_iters = 5000, double fw_tol = 1e-3);

// 4 d / min_x robust_gap(x*, x)^2; +infinity for a single-arm instance.
double worst_case_bound(const Instance& instance);

// 2 log(1/(2 delta)) times the gap-weighted criterion evaluated at the given
// design: the sample count any delta-sound procedure needs under this
// allocation.
double lower_bound_value(const Instance& instance, const Design& design, double delta);

// Sample count the gap-weighted certificate needs at level delta:
// 2 log(|Z|^2/delta) * h_r.
double oracle_predicted_n(const Instance& instance, double delta,
                          int fw_max_iters = 5000, double fw_tol = 1e-3);

}  // namespace rbai
