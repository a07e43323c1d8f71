#pragma once

#include <cstdint>

#include "rbai/instance.hpp"

namespace rbai {

// Identifier for the generator + Gaussian recipe below; recorded in run
// metadata so result files are comparable across platforms.
inline constexpr const char* kPrngId = "xoshiro256ss-polar/v1";

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** with splitmix64 seeding and Marsaglia polar normals. Used
// instead of <random> distributions because their output is
// implementation-defined and results must be bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();  // [0, 1), 53-bit resolution
  double standard_normal();

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Draws rewards (x - y)^T theta + noise for difference vectors of one
// instance. Rejects vectors that do not belong to the instance.
class RewardSampler {
 public:
  RewardSampler(const Instance& instance, std::uint64_t seed);

  double pull(const DiffVector& z);
  long total_pulls() const { return count_; }

 private:
  const Instance* instance_;
  Rng rng_;
  long count_ = 0;
};

// d+1 unit-ish arms in R^d where only the first two coordinates matter: arms
// e_1..e_d, one extra arm e_1 + sin(0.01) e_2, theta = 2 e_1, and per-arm
// adversary shifts of sizes 0.01 j. The extra arm's robust value trails the
// best arm's by roughly 1e-4 while every e_i for i >= 2 is far behind, so
// dimension inflates the instance without moving the hard comparison.
Instance make_irrelevant_dims(int dim, int n_y = 5, std::uint64_t seed = 0);

// n_arms uniform random unit vectors; theta equals one arm of the closest
// pair. That pair gets the single adversary action -alpha x, all other arms
// get n_y random actions of norm alpha.
Instance make_unit_sphere(int dim, int n_arms, int n_y = 5, double alpha = 0.05,
                          std::uint64_t seed = 0);

}  // namespace rbai
