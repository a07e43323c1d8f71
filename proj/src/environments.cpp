#include "rbai/environments.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rbai {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

RewardSampler::RewardSampler(const Instance& instance, std::uint64_t seed)
    : instance_(&instance), rng_(seed) {}

double RewardSampler::pull(const DiffVector& z) {
  const Instance& inst = *instance_;
  if (z.arm_id < 0 || z.arm_id >= inst.n_arms()) {
    throw std::invalid_argument("difference vector references an unknown arm");
  }
  const auto [first, last] = inst.diff_range(z.arm_id);
  if (z.adv_index < 0 || first + z.adv_index >= last) {
    throw std::invalid_argument("difference vector references an unknown adversary action");
  }
  const Vector& ref = inst.diffs()[static_cast<std::size_t>(first + z.adv_index)].z;
  if (z.z.size() != ref.size() || (z.z.array() != ref.array()).any()) {
    throw std::invalid_argument("difference vector does not belong to this instance");
  }
  const double mean = ref.dot(inst.theta());
  ++count_;
  if (inst.noise_std() == 0.0) return mean;  // noiseless pulls consume no draws
  return mean + inst.noise_std() * rng_.standard_normal();
}

Instance make_irrelevant_dims(int dim, int n_y, std::uint64_t /*seed*/) {
  if (dim < 2) throw std::invalid_argument("dim must be at least 2");
  if (n_y < 1) throw std::invalid_argument("n_y must be at least 1");

  std::vector<Arm> arms;
  std::vector<AdversarySet> adversaries;
  arms.reserve(static_cast<std::size_t>(dim) + 1);
  adversaries.reserve(static_cast<std::size_t>(dim) + 1);

  for (int i = 0; i < dim; ++i) {
    Vector x = Vector::Zero(dim);
    x(i) = 1.0;
    arms.push_back({i, std::move(x)});
    AdversarySet a{i, {}};
    for (int j = 1; j <= n_y; ++j) {
      Vector y = Vector::Zero(dim);
      y(i) = 0.01 * j;
      a.actions.push_back(std::move(y));
    }
    adversaries.push_back(std::move(a));
  }

  Vector extra = Vector::Zero(dim);
  extra(0) = 1.0;
  extra(1) = std::sin(0.01);
  arms.push_back({dim, std::move(extra)});
  AdversarySet a{dim, {}};
  const double lift = 1.0 - std::cos(0.01);
  for (int j = 1; j <= n_y; ++j) {
    Vector y = Vector::Zero(dim);
    y(0) = 0.01 * j + lift;
    a.actions.push_back(std::move(y));
  }
  adversaries.push_back(std::move(a));

  Vector theta = Vector::Zero(dim);
  theta(0) = 2.0;
  return Instance(dim, std::move(arms), std::move(adversaries), std::move(theta), 1.0);
}

Instance make_unit_sphere(int dim, int n_arms, int n_y, double alpha, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("dim must be at least 2");
  if (n_arms < 2) throw std::invalid_argument("need at least two arms");
  if (n_y < 1) throw std::invalid_argument("n_y must be at least 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  Rng rng(seed);
  auto draw_unit = [&rng, dim]() {
    Vector v(dim);
    double norm = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v(i) = rng.standard_normal();
      norm = v.norm();
    } while (norm < 1e-12);
    return (v / norm).eval();
  };

  std::vector<Vector> xs;
  xs.reserve(static_cast<std::size_t>(n_arms));
  for (int k = 0; k < n_arms; ++k) xs.push_back(draw_unit());

  int bi = 0, bj = 1;
  double best_dot = xs[0].dot(xs[1]);
  for (int i = 0; i < n_arms; ++i) {
    for (int j = i + 1; j < n_arms; ++j) {
      const double d = xs[static_cast<std::size_t>(i)].dot(xs[static_cast<std::size_t>(j)]);
      if (d > best_dot) {
        best_dot = d;
        bi = i;
        bj = j;
      }
    }
  }

  std::vector<Arm> arms;
  std::vector<AdversarySet> adversaries;
  for (int k = 0; k < n_arms; ++k) {
    arms.push_back({k, xs[static_cast<std::size_t>(k)]});
    AdversarySet a{k, {}};
    if (k == bi || k == bj) {
      a.actions.push_back((-alpha * xs[static_cast<std::size_t>(k)]).eval());
    } else {
      for (int j = 0; j < n_y; ++j) a.actions.push_back((alpha * draw_unit()).eval());
    }
    adversaries.push_back(std::move(a));
  }

  Vector theta = xs[static_cast<std::size_t>(bi)];
  return Instance(dim, std::move(arms), std::move(adversaries), std::move(theta), 1.0);
}

}  // namespace rbai
