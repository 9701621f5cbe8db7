#pragma once

#include <span>

#include "hbn/core/matrix.hpp"

namespace hbn::gaussian {

// Multivariate Gaussian over text embeddings with the covariance shrunk
// toward the identity: density uses (1-alpha)*Sigma + alpha*I, where Sigma is
// the maximum-likelihood estimate (divisor N). The Cholesky factor and log
// determinant of the regularized covariance are cached at construction, so
// density queries work entirely in log space and are safe at d = 768.
class GaussianParams {
 public:
  GaussianParams() = default;

  // `samples` holds one embedding per row.
  static GaussianParams fit(const Matrix& samples, double alpha, bool diagonal);

  static GaussianParams from_moments(Vec mean, Matrix covariance, double alpha,
                                     std::size_t sample_count);
  static GaussianParams from_diagonal_moments(Vec mean, Vec variance,
                                              double alpha,
                                              std::size_t sample_count);

  double log_density(std::span<const double> x) const;

  std::size_t dim() const { return mean_.size(); }
  const Vec& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }  // empty in diagonal mode
  const Vec& variance() const { return var_; }       // empty in full mode
  bool diagonal() const { return diagonal_; }
  double alpha() const { return alpha_; }
  std::size_t sample_count() const { return sample_count_; }
  double log_det() const { return log_det_; }

 private:
  void prepare();  // factorize the regularized covariance

  Vec mean_;
  Matrix cov_;
  Vec var_;
  double alpha_ = 0.0;
  std::size_t sample_count_ = 0;
  bool diagonal_ = false;

  Matrix chol_;
  Vec reg_var_;
  double log_det_ = 0.0;
};

}  // namespace hbn::gaussian
