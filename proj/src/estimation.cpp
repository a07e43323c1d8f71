#include "rbai/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "rbai/errors.hpp"

namespace rbai {

FactoredInverse::FactoredInverse(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("FactoredInverse: square matrix required");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& ev = es.eigenvalues();
  min_eig_ = ev(0);
  max_eig_ = ev(ev.size() - 1);
  if (max_eig_ <= 0.0 || min_eig_ < kSingularTol * max_eig_)
    throw SingularDesign("FactoredInverse: matrix numerically singular");
  eigvecs_ = es.eigenvectors();
  inv_eigvals_ = ev.cwiseInverse();
}

double FactoredInverse::quad_form(const Vector& v) const {
  Vector w = eigvecs_.transpose() * v;
  double q = w.cwiseAbs2().dot(inv_eigvals_);
  return q < 0.0 ? 0.0 : q;
}

Vector FactoredInverse::solve(const Vector& rhs) const {
  return eigvecs_ * (inv_eigvals_.asDiagonal() * (eigvecs_.transpose() * rhs));
}

Matrix FactoredInverse::solve(const Matrix& rhs) const {
  return eigvecs_ * (inv_eigvals_.asDiagonal() * (eigvecs_.transpose() * rhs));
}

Matrix inv_gram(const FactoredInverse& inv, const Matrix& z_columns) {
  return z_columns.transpose() * inv.solve(z_columns);
}

Estimator::Estimator(int dim) {
  if (dim < 1) throw std::invalid_argument("Estimator: dim must be >= 1");
  a_ = Matrix::Zero(dim, dim);
  b_ = Vector::Zero(dim);
}

void Estimator::update(const Vector& z, double reward) { update_batch(z, 1, reward); }

void Estimator::update_batch(const Vector& z, long count, double reward_sum) {
  if (z.size() != a_.rows()) throw std::invalid_argument("Estimator: dimension mismatch");
  if (count < 0) throw std::invalid_argument("Estimator: negative count");
  if (count == 0) return;
  a_.selfadjointView<Eigen::Lower>().rankUpdate(z, static_cast<double>(count));
  a_.triangularView<Eigen::StrictlyUpper>() = a_.transpose();
  b_ += z * reward_sum;
  pulls_ += count;
}

Vector Estimator::theta_hat() const {
  FactoredInverse inv(a_);  // propagates SingularDesign before any pull
  return inv.solve(b_);
}

double confidence_width(const Matrix& a, const Vector& v, double log_term) {
  return confidence_width(FactoredInverse(a), v, log_term);
}

double confidence_width(const FactoredInverse& inv, const Vector& v, double log_term) {
  return std::sqrt(inv.quad_form(v) * log_term);
}

}  // namespace rbai
