#pragma once

#include "rbai/instance.hpp"

namespace rbai {

// Relative eigenvalue floor below which a Gram matrix counts as singular.
inline constexpr double kSingularTol = 1e-10;

// Cached spectral factorization of a symmetric PSD matrix. One decomposition
// serves every A^{-1} application in a phase.
class FactoredInverse {
 public:
  explicit FactoredInverse(const Matrix& a);  // throws SingularDesign

  // v^T A^{-1} v (clamped at 0 against roundoff).
  double quad_form(const Vector& v) const;
  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }

 private:
  Matrix eigvecs_;
  Vector inv_eigvals_;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
};

// Z^T A^{-1} Z for the columns of Z: pairwise inner products in the A^{-1}
// metric, so ||z_i - z_j||^2_{A^{-1}} = G(i,i) + G(j,j) - 2 G(i,j).
Matrix inv_gram(const FactoredInverse& inv, const Matrix& z_columns);

// Running least-squares state: A = sum z z^T, b = sum z r.
class Estimator {
 public:
  explicit Estimator(int dim);

  void update(const Vector& z, double reward);
  // Batched form: count identical directions whose rewards sum to reward_sum.
  void update_batch(const Vector& z, long count, double reward_sum);

  Vector theta_hat() const;  // throws SingularDesign
  const Matrix& gram() const { return a_; }
  const Vector& moment() const { return b_; }
  long pulls() const { return pulls_; }
  int dim() const { return static_cast<int>(a_.rows()); }

 private:
  Matrix a_;
  Vector b_;
  long pulls_ = 0;
};

// ||v||_{A^{-1}} * sqrt(log_term); the caller supplies the log term.
double confidence_width(const Matrix& a, const Vector& v, double log_term);
double confidence_width(const FactoredInverse& inv, const Vector& v, double log_term);

}  // namespace rbai
