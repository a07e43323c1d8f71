#pragma once

// Small instances shared by the unit and acceptance tests.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rbai/environments.hpp"
#include "rbai/instance.hpp"

namespace fix {

using rbai::AdversarySet;
using rbai::Arm;
using rbai::Instance;
using rbai::Vector;

// Two orthogonal arms e1, e2 with singleton zero adversaries.
// Robust values are theta(0) and theta(1).
inline Instance two_arm(double v0, double v1, double noise_std) {
  Vector x0 = Vector::Zero(2);
  x0(0) = 1.0;
  Vector x1 = Vector::Zero(2);
  x1(1) = 1.0;
  Vector theta(2);
  theta << v0, v1;
  std::vector<Arm> arms{{0, x0}, {1, x1}};
  std::vector<AdversarySet> adv{{0, {Vector::Zero(2)}}, {1, {Vector::Zero(2)}}};
  return Instance(2, std::move(arms), std::move(adv), std::move(theta), noise_std);
}

// Equal robust gaps in every direction: arm 0 sits at the origin with
// adversary actions {-e_1, ..., -e_d}, each competitor j is the single point
// -e_j, and theta = (gap/2) * ones. Every robust gap and every quadruple gap
// equals `gap`, and the optimal gap-weighted design value is exactly
// 4 d / gap^2 (uniform weight 1/(2d) on the +-e_k difference vectors).
inline Instance equal_gap(int d, double gap, double noise_std = 1.0) {
  std::vector<Arm> arms;
  std::vector<AdversarySet> adv;
  arms.push_back({0, Vector::Zero(d)});
  AdversarySet a0{0, {}};
  for (int k = 0; k < d; ++k) {
    Vector y = Vector::Zero(d);
    y(k) = -1.0;
    a0.actions.push_back(std::move(y));
  }
  adv.push_back(std::move(a0));
  for (int j = 0; j < d; ++j) {
    Vector x = Vector::Zero(d);
    x(j) = -1.0;
    arms.push_back({j + 1, std::move(x)});
    adv.push_back({j + 1, {Vector::Zero(d)}});
  }
  const Vector theta = Vector::Constant(d, gap / 2.0);
  return Instance(d, std::move(arms), std::move(adv), theta, noise_std);
}

// Random unit-norm arms with singleton zero adversaries; theta is a random
// unit vector. Retries the seed until the instance validates (unique best).
inline Instance random_singleton(int d, int n_arms, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    rbai::Rng rng(seed + attempt * 0x9E3779B9ULL);
    auto draw = [&rng, d]() {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = rng.standard_normal();
      return (v / v.norm()).eval();
    };
    std::vector<Arm> arms;
    std::vector<AdversarySet> adv;
    for (int k = 0; k < n_arms; ++k) {
      arms.push_back({k, draw()});
      adv.push_back({k, {Vector::Zero(d)}});
    }
    const Vector theta = draw();
    try {
      return Instance(d, std::move(arms), std::move(adv), theta, 1.0);
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("random_singleton: no valid instance found");
}

// Random arms, each with n_y random adversary actions of norm `radius`.
inline Instance random_adversarial(int d, int n_arms, int n_y, double radius,
                                   std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    rbai::Rng rng(seed + attempt * 0x9E3779B9ULL);
    auto draw = [&rng, d]() {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = rng.standard_normal();
      return (v / v.norm()).eval();
    };
    std::vector<Arm> arms;
    std::vector<AdversarySet> adv;
    for (int k = 0; k < n_arms; ++k) {
      arms.push_back({k, draw()});
      AdversarySet a{k, {}};
      for (int j = 0; j < n_y; ++j) a.actions.push_back((radius * draw()).eval());
      adv.push_back(std::move(a));
    }
    const Vector theta = draw();
    try {
      return Instance(d, std::move(arms), std::move(adv), theta, 1.0);
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("random_adversarial: no valid instance found");
}

// |Z| = 3 with one two-action arm: exercises the min over y' branches.
inline Instance three_diffs_two_arms() {
  Vector x0(2), x1(2);
  x0 << 1.0, 0.0;
  x1 << 0.0, 1.0;
  Vector y01(2), y02(2);
  y01 << 0.0, 0.3;
  y02 << 0.2, -0.1;
  Vector theta(2);
  theta << 1.0, 0.2;
  std::vector<Arm> arms{{0, x0}, {1, x1}};
  std::vector<AdversarySet> adv{{0, {y01, y02}}, {1, {Vector::Zero(2)}}};
  return Instance(2, std::move(arms), std::move(adv), std::move(theta), 1.0);
}

// |Z| = 3 singleton arms in the plane.
inline Instance three_arms_plane() {
  Vector x0(2), x1(2), x2(2);
  x0 << 1.0, 0.0;
  x1 << 0.0, 1.0;
  x2 << 0.6, 0.6;
  Vector theta(2);
  theta << 1.0, 0.1;
  std::vector<Arm> arms{{0, x0}, {1, x1}, {2, x2}};
  std::vector<AdversarySet> adv{
      {0, {Vector::Zero(2)}}, {1, {Vector::Zero(2)}}, {2, {Vector::Zero(2)}}};
  return Instance(2, std::move(arms), std::move(adv), std::move(theta), 1.0);
}

}  // namespace fix
