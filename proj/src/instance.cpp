#include "rbai/instance.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rbai/errors.hpp"

namespace rbai {

Instance::Instance(int dim, std::vector<Arm> arms, std::vector<AdversarySet> adversaries,
                   Vector theta, double noise_std)
    : dim_(dim),
      arms_(std::move(arms)),
      adversaries_(std::move(adversaries)),
      theta_(std::move(theta)),
      noise_std_(noise_std) {
  build_and_validate(false);
}

Instance::Instance(int dim, std::vector<Arm> arms, std::vector<AdversarySet> adversaries,
                   Vector theta, double noise_std, double feature_bound)
    : dim_(dim),
      arms_(std::move(arms)),
      adversaries_(std::move(adversaries)),
      theta_(std::move(theta)),
      noise_std_(noise_std),
      feature_bound_(feature_bound) {
  build_and_validate(true);
}

void Instance::build_and_validate(bool bound_supplied) {
  if (dim_ < 1) throw std::invalid_argument("instance: dim must be >= 1");
  if (arms_.empty()) throw std::invalid_argument("instance: needs at least one arm");
  if (theta_.size() != dim_) throw std::invalid_argument("instance: theta dimension mismatch");
  if (!(noise_std_ >= 0.0)) throw std::invalid_argument("instance: noise_std must be >= 0");
  if (adversaries_.size() != arms_.size())
    throw std::invalid_argument("instance: one adversary set per arm required");

  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].id != static_cast<int>(i))
      throw std::invalid_argument("instance: arm ids must equal their indices");
    if (arms_[i].features.size() != dim_)
      throw std::invalid_argument("instance: arm feature dimension mismatch");
    if (adversaries_[i].arm_id != static_cast<int>(i))
      throw std::invalid_argument("instance: adversary set order must match arms");
    if (adversaries_[i].actions.empty())
      throw std::invalid_argument("instance: adversary sets must be non-empty");
    for (const Vector& y : adversaries_[i].actions)
      if (y.size() != dim_)
        throw std::invalid_argument("instance: adversary action dimension mismatch");
  }

  diffs_.clear();
  diff_offsets_.assign(arms_.size() + 1, 0);
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    diff_offsets_[i] = static_cast<int>(diffs_.size());
    const auto& acts = adversaries_[i].actions;
    for (std::size_t j = 0; j < acts.size(); ++j)
      diffs_.push_back({static_cast<int>(i), static_cast<int>(j), arms_[i].features - acts[j]});
  }
  diff_offsets_.back() = static_cast<int>(diffs_.size());

  const int m = static_cast<int>(diffs_.size());
  diff_matrix_.resize(dim_, m);
  for (int k = 0; k < m; ++k) diff_matrix_.col(k) = diffs_[k].z;

  // Pairwise-distinct difference vectors.
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if ((diffs_[a].z - diffs_[b].z).lpNorm<Eigen::Infinity>() <= kTieTol)
        throw std::invalid_argument("instance: duplicate difference vectors");

  // Norm bound: recorded, never consumed by the algorithms.
  double max_norm = 0.0;
  for (const DiffVector& dv : diffs_) max_norm = std::max(max_norm, dv.z.norm());
  if (bound_supplied) {
    if (max_norm > feature_bound_ + kTieTol)
      throw std::invalid_argument("instance: a difference vector exceeds the declared norm bound");
  } else {
    feature_bound_ = max_norm;
  }

  // Span check on sum zz^T via the relative eigenvalue floor.
  Matrix s = diff_matrix_ * diff_matrix_.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const auto& ev = es.eigenvalues();
  if (ev(ev.size() - 1) <= 0.0 || ev(0) < kSpanTol * ev(ev.size() - 1))
    throw NonSpanning("instance: difference vectors do not span R^d");

  // Unique best robust arm (single-arm instances are trivially fine).
  if (arms_.size() > 1) {
    std::vector<double> vals = robust_values_under(*this, theta_);
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    for (double v : vals) {
      if (v > best) {
        second = best;
        best = v;
      } else if (v > second) {
        second = v;
      }
    }
    if (best - second <= kTieTol)
      throw std::invalid_argument("instance: best robust arm is not unique");
  }
}

std::pair<int, int> Instance::diff_range(int arm_id) const {
  if (arm_id < 0 || arm_id >= n_arms()) throw std::out_of_range("diff_range: bad arm id");
  return {diff_offsets_[arm_id], diff_offsets_[arm_id + 1]};
}

const std::vector<DiffVector>& diff_set(const Instance& instance) { return instance.diffs(); }

std::vector<double> robust_values_under(const Instance& instance, const Vector& theta) {
  std::vector<double> out(instance.n_arms());
  const Vector dots = instance.diff_matrix().transpose() * theta;
  for (int a = 0; a < instance.n_arms(); ++a) {
    auto [first, last] = instance.diff_range(a);
    double v = dots(first);
    for (int k = first + 1; k < last; ++k) v = std::min(v, dots(k));
    out[a] = v;
  }
  return out;
}

double robust_value(const Instance& instance, int arm_id) {
  if (arm_id < 0 || arm_id >= instance.n_arms())
    throw std::out_of_range("robust_value: bad arm id");
  auto [first, last] = instance.diff_range(arm_id);
  double v = std::numeric_limits<double>::infinity();
  for (int k = first; k < last; ++k)
    v = std::min(v, instance.diffs()[k].z.dot(instance.theta()));
  return v;
}

int best_robust_arm(const Instance& instance) {
  std::vector<double> vals = robust_values_under(instance, instance.theta());
  int best = 0;
  for (int a = 1; a < instance.n_arms(); ++a)
    if (vals[a] > vals[best]) best = a;
  if (instance.n_arms() > 1) {
    double second = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < instance.n_arms(); ++a)
      if (a != best) second = std::max(second, vals[a]);
    if (vals[best] - second <= kTieTol)
      throw std::runtime_error("best_robust_arm: tie on robust value");
  }
  return best;
}

double robust_gap(const Instance& instance, int arm_a, int arm_b) {
  return robust_value(instance, arm_a) - robust_value(instance, arm_b);
}

double quad_gap(const Instance& instance, int arm_x, int adv_y, int arm_xp, int adv_yp) {
  auto [fx, lx] = instance.diff_range(arm_x);
  auto [fp, lp] = instance.diff_range(arm_xp);
  if (adv_y < 0 || fx + adv_y >= lx) throw std::out_of_range("quad_gap: bad adversary index");
  if (adv_yp < 0 || fp + adv_yp >= lp) throw std::out_of_range("quad_gap: bad adversary index");
  const Vector& zx = instance.diffs()[fx + adv_y].z;
  const Vector& zp = instance.diffs()[fp + adv_yp].z;
  return (zx - zp).dot(instance.theta());
}

}  // namespace rbai
