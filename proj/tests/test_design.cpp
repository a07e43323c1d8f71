#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "reference.hpp"
#include "rbai/design.hpp"
#include "rbai/environments.hpp"
#include "rbai/errors.hpp"
#include "rbai/instance.hpp"

using rbai::Design;
using rbai::DesignObjective;
using rbai::Instance;
using rbai::Matrix;
using rbai::SolveResult;
using rbai::Vector;

namespace {

Design random_design(int m, std::uint64_t seed) {
  rbai::Rng rng(seed);
  Vector w(m);
  for (int i = 0; i < m; ++i) w(i) = rng.uniform01() + 0.05;
  w /= w.sum();
  return Design{w};
}

}  // namespace

TEST_CASE("design matrix equals the weighted outer-product sum") {
  const Instance inst = rbai::make_irrelevant_dims(3);
  const Design d = random_design(inst.n_diffs(), 11);
  CHECK(rbai::design_matrix(inst, d).isApprox(ref::info_matrix(inst, d.weights), 1e-12));
}

TEST_CASE("invalid designs are rejected") {
  const Instance inst = fix::two_arm(1.0, 0.5, 1.0);
  const DesignObjective g = DesignObjective::g_allocation();

  Vector short_w(1);
  short_w << 1.0;
  CHECK_THROWS_AS(rbai::objective_value(g, inst, Design{short_w}), std::invalid_argument);

  Vector negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(rbai::objective_value(g, inst, Design{negative}), std::invalid_argument);

  Vector bad_sum(2);
  bad_sum << 0.6, 0.6;
  CHECK_THROWS_AS(rbai::objective_value(g, inst, Design{bad_sum}), std::invalid_argument);
}

TEST_CASE("worst-case criterion values") {
  const Instance inst = fix::two_arm(1.0, 0.5, 1.0);
  const DesignObjective g = DesignObjective::g_allocation();

  Vector uniform(2);
  uniform << 0.5, 0.5;
  CHECK(rbai::objective_value(g, inst, Design{uniform}) == doctest::Approx(2.0).epsilon(1e-9));

  // All mass on one direction leaves the other unexplored.
  Vector degenerate(2);
  degenerate << 1.0, 0.0;
  CHECK(std::isinf(rbai::objective_value(g, inst, Design{degenerate})));
}

TEST_CASE("criterion values match the reference loops on random designs") {
  const Instance inst = fix::three_diffs_two_arms();
  const DesignObjective g = DesignObjective::g_allocation();
  const DesignObjective oracle = DesignObjective::oracle(inst);
  const DesignObjective phase = DesignObjective::rage_phase({0, 1});

  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Design d = random_design(inst.n_diffs(), seed);
    CHECK(rbai::objective_value(g, inst, d) ==
          doctest::Approx(ref::g_objective(inst, d.weights)).epsilon(1e-9));
    CHECK(rbai::objective_value(oracle, inst, d) ==
          doctest::Approx(ref::oracle_objective(inst, d.weights)).epsilon(1e-9));
    CHECK(rbai::objective_value(phase, inst, d) ==
          doctest::Approx(ref::rage_objective(inst, {0, 1}, d.weights)).epsilon(1e-9));
  }
}

TEST_CASE("gap-weighted criterion on the unit-gap pair") {
  const Instance inst = fix::two_arm(1.0, 0.0, 1.0);
  const DesignObjective oracle = DesignObjective::oracle(inst);
  Vector uniform(2);
  uniform << 0.5, 0.5;
  // ||e1 - e2||^2 at A = I/2 is 4; the quadruple gap is 1.
  CHECK(rbai::objective_value(oracle, inst, Design{uniform}) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("criterion value survives re-enumerating the directions") {
  const Instance a = fix::three_arms_plane();
  // Same geometry with arms listed in a different order.
  Vector x0(2), x1(2), x2(2);
  x0 << 0.6, 0.6;
  x1 << 1.0, 0.0;
  x2 << 0.0, 1.0;
  Vector theta(2);
  theta << 1.0, 0.1;
  const Instance b(2, {{0, x0}, {1, x1}, {2, x2}},
                   {{0, {Vector::Zero(2)}}, {1, {Vector::Zero(2)}}, {2, {Vector::Zero(2)}}},
                   theta, 1.0);

  Vector wa(3);
  wa << 0.2, 0.3, 0.5;  // weights for arms (e1, e2, diag)
  Vector wb(3);
  wb << 0.5, 0.2, 0.3;  // the same weights in b's enumeration
  const DesignObjective g = DesignObjective::g_allocation();
  CHECK(rbai::objective_value(g, a, Design{wa}) ==
        doctest::Approx(rbai::objective_value(g, b, Design{wb})).epsilon(1e-12));
}

TEST_CASE("phase criterion grows with the active set and vanishes alone") {
  const Instance inst = fix::three_arms_plane();
  const Design d = random_design(inst.n_diffs(), 3);
  const double one = rbai::objective_value(DesignObjective::rage_phase({0}), inst, d);
  const double two = rbai::objective_value(DesignObjective::rage_phase({0, 1}), inst, d);
  CHECK(one == doctest::Approx(0.0).epsilon(1e-12));  // only the self-pair
  CHECK(two >= one);
}

TEST_CASE("phase objective validates the active set") {
  const Instance inst = fix::three_arms_plane();
  const Design d = random_design(inst.n_diffs(), 4);
  CHECK_THROWS_AS(rbai::objective_value(DesignObjective::rage_phase({}), inst, d),
                  std::invalid_argument);
  CHECK_THROWS_AS(rbai::objective_value(DesignObjective::rage_phase({0, 0}), inst, d),
                  std::invalid_argument);
  CHECK_THROWS_AS(rbai::objective_value(DesignObjective::rage_phase({0, 7}), inst, d),
                  std::invalid_argument);
}

TEST_CASE("solver reaches the Kiefer-Wolfowitz optimum") {
  const Instance pair = fix::two_arm(1.0, 0.5, 1.0);
  const SolveResult sol = rbai::solve_design(DesignObjective::g_allocation(), pair);
  CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.design.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.design.weights.minCoeff() >= 0.0);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const int d = 2 + static_cast<int>(seed * 2);
    const Instance inst = fix::random_singleton(d, 2 * d, seed * 101);
    const SolveResult s = rbai::solve_design(DesignObjective::g_allocation(), inst);
    CHECK(s.value >= static_cast<double>(d) - 1e-9);
    CHECK(s.value <= 1.05 * d);
  }
}

TEST_CASE("solver checkpoints never increase") {
  const Instance inst = fix::random_singleton(4, 8, 99);
  const SolveResult sol = rbai::solve_design(DesignObjective::g_allocation(), inst);
  REQUIRE(!sol.checkpoints.empty());
  CHECK(static_cast<int>(sol.checkpoints.size()) == sol.iterations);
  for (std::size_t k = 1; k < sol.checkpoints.size(); ++k) {
    CHECK(sol.checkpoints[k] <= sol.checkpoints[k - 1] + 1e-15);
  }
  CHECK(sol.value == doctest::Approx(sol.checkpoints.back()));
}

TEST_CASE("solver matches an exhaustive grid on tiny instances") {
  const double step = 1e-3;

  const Instance pair = fix::two_arm(1.0, 0.0, 1.0);
  const Instance mixed = fix::three_diffs_two_arms();
  const Instance plane = fix::three_arms_plane();

  auto check_both = [&](const Instance& inst) {
    const int m = inst.n_diffs();
    const double grid_g =
        ref::grid_min([&](const Vector& w) { return ref::g_objective(inst, w); }, m, step);
    const double fw_g =
        rbai::solve_design(DesignObjective::g_allocation(), inst, 20000, 1e-6).value;
    CHECK(std::abs(fw_g - grid_g) <= 0.01 * grid_g);

    const double grid_o = ref::grid_min(
        [&](const Vector& w) { return ref::oracle_objective(inst, w); }, m, step);
    const double fw_o =
        rbai::solve_design(DesignObjective::oracle(inst), inst, 20000, 1e-6).value;
    CHECK(std::abs(fw_o - grid_o) <= 0.01 * grid_o);
  };

  check_both(pair);
  check_both(mixed);
  check_both(plane);
}

TEST_CASE("equal-gap instance attains the dimensional bound") {
  const int d = 4;
  const double gap = 0.5;
  const Instance inst = fix::equal_gap(d, gap);
  const double bound = 4.0 * d / (gap * gap);
  const SolveResult sol = rbai::solve_design(DesignObjective::oracle(inst), inst);
  CHECK(sol.value >= bound - 1e-6);  // the bound is the exact optimum here
  CHECK(sol.value <= 1.05 * bound);
}

TEST_CASE("apportionment reproduces the hand traces") {
  SUBCASE("two equal weights, budget 5") {
    Vector w(2);
    w << 0.5, 0.5;
    const std::vector<long> counts = rbai::round_design(Design{w}, 5, 0.8);
    CHECK(counts == std::vector<long>{3, 2});
  }
  SUBCASE("point mass") {
    Vector w(3);
    w << 1.0, 0.0, 0.0;
    const std::vector<long> counts = rbai::round_design(Design{w}, 100, 0.1);
    CHECK(counts == std::vector<long>{100, 0, 0});
  }
  SUBCASE("uniform over four support points") {
    Vector w(4);
    w << 0.25, 0.25, 0.25, 0.25;
    const std::vector<long> counts = rbai::round_design(Design{w}, 40, 0.2);
    CHECK(counts == std::vector<long>{10, 10, 10, 10});
  }
}

TEST_CASE("apportionment floor and support") {
  Vector w(3);
  w << 0.5, 0.5, 1e-12;  // third weight is off-support
  const Design d{w / w.sum()};
  CHECK(rbai::support_size(d) == 2);
  CHECK(rbai::rounding_floor(d, 0.1) == 40);
  CHECK(rbai::rounding_floor(d, 0.8) == 5);
  CHECK_THROWS_AS(rbai::rounding_floor(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rbai::round_design(d, 4, 0.8), rbai::InsufficientBudget);
  CHECK_THROWS_AS(rbai::round_design(d, 39, 0.1), rbai::InsufficientBudget);
}

TEST_CASE("apportionment sums exactly and stays on support") {
  rbai::Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 6);
    Vector w(m);
    for (int i = 0; i < m; ++i) w(i) = rng.uniform01() + 1e-3;
    w /= w.sum();
    const Design d{w};
    const long floor_n = rbai::rounding_floor(d, 0.1);
    const long n = floor_n + static_cast<long>(rng.next_u64() % 1000);
    const std::vector<long> counts = rbai::round_design(d, n, 0.1);
    long total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      CHECK(counts[k] >= 0);
      if (d.weights(static_cast<Eigen::Index>(k)) <= rbai::kSupportTol) CHECK(counts[k] == 0);
      total += counts[k];
    }
    CHECK(total == n);
  }
}
