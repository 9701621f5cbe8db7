#pragma once

#include <span>

#include "hbn/core/matrix.hpp"

namespace hbn::kernels {

// Serial reference implementations. The dispatching functions below run the
// same per-element code inside OpenMP loops, so for every kernel
// parallel and serial results are bit-identical regardless of thread count.
namespace serial {
double dot(std::span<const double> a, std::span<const double> b);
void affine(const Matrix& w, std::span<const double> x,
            std::span<const double> bias, std::span<double> out);
void gemv_transposed(const Matrix& w, std::span<const double> v,
                     std::span<double> out);
void mean_and_covariance(const Matrix& samples, Vec& mean, Matrix& cov);
bool cholesky_in_place(Matrix& a);
}  // namespace serial

double dot(std::span<const double> a, std::span<const double> b);

// out = W x + bias, parallel over output rows.
void affine(const Matrix& w, std::span<const double> x,
            std::span<const double> bias, std::span<double> out);

// out = W^T v, parallel over output columns.
void gemv_transposed(const Matrix& w, std::span<const double> v,
                     std::span<double> out);

// grad += scale * u v^T. Called per sample inside batch loops; serial.
void add_outer(Matrix& grad, std::span<const double> u,
               std::span<const double> v, double scale);

// Sample mean and maximum-likelihood covariance (divisor N) of the rows of
// `samples`. Parallel over covariance cells.
void mean_and_covariance(const Matrix& samples, Vec& mean, Matrix& cov);

// In-place Cholesky factorization, lower triangle; returns false when the
// matrix is not positive definite. Parallel over the rows of each column.
bool cholesky_in_place(Matrix& a);

// Solves L x = b for lower-triangular L.
void solve_lower(const Matrix& l, std::span<const double> b,
                 std::span<double> x);

// r^T (L L^T)^{-1} r  via one forward solve.
double quad_form_cholesky(const Matrix& l, std::span<const double> r);

// log sum_i exp(v[i]); returns -inf for an all -inf input.
double log_sum_exp(std::span<const double> v);

}  // namespace hbn::kernels
