#include "hbn/gaussian/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hbn/core/errors.hpp"
#include "hbn/core/kernels.hpp"

namespace hbn::gaussian {

GaussianParams GaussianParams::fit(const Matrix& samples, double alpha,
                                   bool diagonal) {
  if (samples.rows < 1) throw std::invalid_argument("gaussian fit needs samples");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");

  GaussianParams g;
  g.alpha_ = alpha;
  g.sample_count_ = samples.rows;
  g.diagonal_ = diagonal;

  Matrix cov;
  kernels::mean_and_covariance(samples, g.mean_, cov);
  if (diagonal) {
    g.var_.resize(samples.cols);
    for (std::size_t i = 0; i < samples.cols; ++i) g.var_[i] = cov(i, i);
  } else {
    g.cov_ = std::move(cov);
  }
  g.prepare();
  return g;
}

GaussianParams GaussianParams::from_moments(Vec mean, Matrix covariance,
                                            double alpha,
                                            std::size_t sample_count) {
  if (covariance.rows != mean.size() || covariance.cols != mean.size())
    throw std::invalid_argument("covariance shape does not match the mean");
  GaussianParams g;
  g.mean_ = std::move(mean);
  g.cov_ = std::move(covariance);
  g.alpha_ = alpha;
  g.sample_count_ = sample_count;
  g.prepare();
  return g;
}

GaussianParams GaussianParams::from_diagonal_moments(Vec mean, Vec variance,
                                                     double alpha,
                                                     std::size_t sample_count) {
  if (variance.size() != mean.size())
    throw std::invalid_argument("variance length does not match the mean");
  GaussianParams g;
  g.mean_ = std::move(mean);
  g.var_ = std::move(variance);
  g.alpha_ = alpha;
  g.sample_count_ = sample_count;
  g.diagonal_ = true;
  g.prepare();
  return g;
}

void GaussianParams::prepare() {
  const std::size_t d = mean_.size();
  if (diagonal_) {
    reg_var_.resize(d);
    log_det_ = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      reg_var_[i] = (1.0 - alpha_) * var_[i] + alpha_;
      if (!(reg_var_[i] > 0.0)) {
        if (alpha_ == 0.0)
          throw NumericError(
              "covariance is rank deficient; a positive alpha is required");
        throw NumericError("regularized variance is not positive");
      }
      log_det_ += std::log(reg_var_[i]);
    }
    return;
  }

  chol_ = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      chol_(i, j) = (1.0 - alpha_) * cov_(i, j) + (i == j ? alpha_ : 0.0);
  if (!kernels::cholesky_in_place(chol_)) {
    if (alpha_ == 0.0)
      throw NumericError(
          "covariance is rank deficient; a positive alpha is required");
    throw NumericError("regularized covariance is not positive definite");
  }
  log_det_ = 0.0;
  for (std::size_t i = 0; i < d; ++i) log_det_ += 2.0 * std::log(chol_(i, i));
}

double GaussianParams::log_density(std::span<const double> x) const {
  const std::size_t d = mean_.size();
  if (x.size() != d)
    throw std::invalid_argument("embedding size " + std::to_string(x.size()) +
                                ", expected " + std::to_string(d));
  Vec diff(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(x[i]))
      throw std::invalid_argument("non-finite embedding entry");
    diff[i] = x[i] - mean_[i];
  }

  double quad;
  if (diagonal_) {
    quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) quad += diff[i] * diff[i] / reg_var_[i];
  } else {
    quad = kernels::quad_form_cholesky(chol_, diff);
  }
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) +
                 log_det_ + quad);
}

}  // namespace hbn::gaussian
