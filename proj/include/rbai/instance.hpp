#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rbai {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Absolute tolerance for value ties (robust values, argmax comparisons).
inline constexpr double kTieTol = 1e-12;
// Relative eigenvalue floor below which a z-set is considered non-spanning.
inline constexpr double kSpanTol = 1e-9;

struct Arm {
  int id = 0;          // equals its index in Instance::arms()
  Vector features;     // x in R^d
};

// Adversary action set Y(x) for one arm; never empty.
struct AdversarySet {
  int arm_id = 0;
  std::vector<Vector> actions;  // each y in R^d
};

// One query direction z = x - y, tagged with its originating pair.
struct DiffVector {
  int arm_id = 0;
  int adv_index = 0;  // index into the arm's action list
  Vector z;
};

// A problem instance: arms, per-arm adversary sets, hidden parameter, noise
// scale. Construction validates every structural invariant and caches the
// difference-vector enumeration (arm-index major, adversary-index minor).
class Instance {
 public:
  Instance(int dim, std::vector<Arm> arms, std::vector<AdversarySet> adversaries,
           Vector theta, double noise_std);
  // Same, with an explicit norm bound to record; max ||z|| must not exceed it.
  Instance(int dim, std::vector<Arm> arms, std::vector<AdversarySet> adversaries,
           Vector theta, double noise_std, double feature_bound);

  int dim() const { return dim_; }
  int n_arms() const { return static_cast<int>(arms_.size()); }
  const std::vector<Arm>& arms() const { return arms_; }
  const std::vector<AdversarySet>& adversaries() const { return adversaries_; }
  const Vector& theta() const { return theta_; }
  double noise_std() const { return noise_std_; }
  double feature_bound() const { return feature_bound_; }

  const std::vector<DiffVector>& diffs() const { return diffs_; }
  int n_diffs() const { return static_cast<int>(diffs_.size()); }
  // d x |Z| matrix whose columns are the difference vectors, in diffs() order.
  const Matrix& diff_matrix() const { return diff_matrix_; }
  // Half-open column range [first, last) of diff_matrix() belonging to an arm.
  std::pair<int, int> diff_range(int arm_id) const;

 private:
  Instance() = default;
  void build_and_validate(bool bound_supplied);

  int dim_ = 0;
  std::vector<Arm> arms_;
  std::vector<AdversarySet> adversaries_;
  Vector theta_;
  double noise_std_ = 0.0;
  double feature_bound_ = 0.0;
  std::vector<DiffVector> diffs_;
  Matrix diff_matrix_;
  std::vector<int> diff_offsets_;  // per-arm start index, plus total sentinel
};

// Enumeration of {x - y : x in X, y in Y(x)}, arm-major / adversary-minor.
const std::vector<DiffVector>& diff_set(const Instance& instance);

// min_{y in Y(x)} (x - y)^T theta for the arm with the given id.
double robust_value(const Instance& instance, int arm_id);

// Worst-case values for every arm under an arbitrary parameter vector.
std::vector<double> robust_values_under(const Instance& instance, const Vector& theta);

// argmax of robust_value; throws if the top two arms tie within kTieTol.
int best_robust_arm(const Instance& instance);

// robust_value(a) - robust_value(b).
double robust_gap(const Instance& instance, int arm_a, int arm_b);

// (x - y - (x' - y'))^T theta for the quadruple of indices.
double quad_gap(const Instance& instance, int arm_x, int adv_y, int arm_xp, int adv_yp);

}  // namespace rbai
