#include "hbn/core/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "hbn/core/parallel.hpp"

namespace hbn::kernels {

namespace {

// Shared per-element bodies. Serial and parallel paths both funnel through
// these, which is what makes the two paths bit-identical.

double dot_n(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double affine_row(const Matrix& w, std::span<const double> x,
                  std::span<const double> bias, std::size_t i) {
  return dot_n(w.row(i), x.data(), w.cols) + bias[i];
}

double gemv_t_col(const Matrix& w, std::span<const double> v, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.rows; ++i) s += w(i, j) * v[i];
  return s;
}

double column_mean(const Matrix& x, std::size_t j) {
  double s = 0.0;
  for (std::size_t n = 0; n < x.rows; ++n) s += x(n, j);
  return s / static_cast<double>(x.rows);
}

// One cell of the ML covariance from the centered d x N transpose.
double cov_cell(const Matrix& centered_t, std::size_t i, std::size_t j) {
  return dot_n(centered_t.row(i), centered_t.row(j), centered_t.cols) /
         static_cast<double>(centered_t.cols);
}

double cholesky_off_diag(const Matrix& a, std::size_t i, std::size_t j,
                         double inv_diag) {
  return (a(i, j) - dot_n(a.row(i), a.row(j), j)) * inv_diag;
}

constexpr std::size_t kParallelFlopThreshold = 16 * 1024;

}  // namespace

// ---------------------------------------------------------------------------
// serial reference

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return dot_n(a.data(), b.data(), a.size());
}

void affine(const Matrix& w, std::span<const double> x,
            std::span<const double> bias, std::span<double> out) {
  assert(x.size() == w.cols && out.size() == w.rows && bias.size() == w.rows);
  for (std::size_t i = 0; i < w.rows; ++i) out[i] = affine_row(w, x, bias, i);
}

void gemv_transposed(const Matrix& w, std::span<const double> v,
                     std::span<double> out) {
  assert(v.size() == w.rows && out.size() == w.cols);
  for (std::size_t j = 0; j < w.cols; ++j) out[j] = gemv_t_col(w, v, j);
}

void mean_and_covariance(const Matrix& samples, Vec& mean, Matrix& cov) {
  const std::size_t n = samples.rows, d = samples.cols;
  assert(n > 0);
  mean.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) mean[j] = column_mean(samples, j);

  Matrix centered_t(d, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < n; ++k)
      centered_t(i, k) = samples(k, i) - mean[i];

  cov = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double c = cov_cell(centered_t, i, j);
      cov(i, j) = c;
      cov(j, i) = c;
    }
}

bool cholesky_in_place(Matrix& a) {
  assert(a.rows == a.cols);
  const std::size_t d = a.rows;
  for (std::size_t j = 0; j < d; ++j) {
    double s = a(j, j) - dot_n(a.row(j), a.row(j), j);
    if (!(s > 0.0)) return false;
    double diag = std::sqrt(s);
    a(j, j) = diag;
    double inv = 1.0 / diag;
    for (std::size_t i = j + 1; i < d; ++i)
      a(i, j) = cholesky_off_diag(a, i, j, inv);
  }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
  return true;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// dispatching kernels

double dot(std::span<const double> a, std::span<const double> b) {
  // A dot product is a single dependent reduction; parallelizing it would
  // change the summation order, so it stays serial at every size.
  return serial::dot(a, b);
}

void affine(const Matrix& w, std::span<const double> x,
            std::span<const double> bias, std::span<double> out) {
  assert(x.size() == w.cols && out.size() == w.rows && bias.size() == w.rows);
  if (!parallel::enabled() || w.rows * w.cols < kParallelFlopThreshold) {
    serial::affine(w, x, bias, out);
    return;
  }
  parallel::for_each_index(w.rows,
                           [&](std::size_t i) { out[i] = affine_row(w, x, bias, i); });
}

void gemv_transposed(const Matrix& w, std::span<const double> v,
                     std::span<double> out) {
  assert(v.size() == w.rows && out.size() == w.cols);
  if (!parallel::enabled() || w.rows * w.cols < kParallelFlopThreshold) {
    serial::gemv_transposed(w, v, out);
    return;
  }
  parallel::for_each_index(w.cols,
                           [&](std::size_t j) { out[j] = gemv_t_col(w, v, j); });
}

void add_outer(Matrix& grad, std::span<const double> u,
               std::span<const double> v, double scale) {
  assert(grad.rows == u.size() && grad.cols == v.size());
  for (std::size_t i = 0; i < grad.rows; ++i) {
    double* row = grad.row(i);
    double s = scale * u[i];
    for (std::size_t j = 0; j < grad.cols; ++j) row[j] += s * v[j];
  }
}

void mean_and_covariance(const Matrix& samples, Vec& mean, Matrix& cov) {
  const std::size_t n = samples.rows, d = samples.cols;
  assert(n > 0);
  if (!parallel::enabled() || n * d * d < kParallelFlopThreshold) {
    serial::mean_and_covariance(samples, mean, cov);
    return;
  }
  mean.assign(d, 0.0);
  parallel::for_each_index(d, [&](std::size_t j) { mean[j] = column_mean(samples, j); });

  Matrix centered_t(d, n);
  parallel::for_each_index(d, [&](std::size_t i) {
    for (std::size_t k = 0; k < n; ++k)
      centered_t(i, k) = samples(k, i) - mean[i];
  });

  cov = Matrix(d, d);
  // Upper triangle flattened so the load spreads evenly.
  std::size_t cells = d * (d + 1) / 2;
  parallel::for_each_index(cells, [&](std::size_t c) {
    // Invert c = i*d - i*(i-1)/2 + (j - i) by scanning rows; d is at most a
    // few thousand here so the scan cost is irrelevant.
    std::size_t i = 0, base = 0;
    while (base + (d - i) <= c) {
      base += d - i;
      ++i;
    }
    std::size_t j = i + (c - base);
    double v = cov_cell(centered_t, i, j);
    cov(i, j) = v;
    cov(j, i) = v;
  });
}

bool cholesky_in_place(Matrix& a) {
  assert(a.rows == a.cols);
  const std::size_t d = a.rows;
  if (!parallel::enabled()) return serial::cholesky_in_place(a);

  for (std::size_t j = 0; j < d; ++j) {
    double s = a(j, j) - dot_n(a.row(j), a.row(j), j);
    if (!(s > 0.0)) return false;
    double diag = std::sqrt(s);
    a(j, j) = diag;
    double inv = 1.0 / diag;
    // A column is worth a parallel region only once its update volume beats
    // the barrier cost; early and late columns stay serial.
    const std::size_t rows_below = d - j - 1;
    if (rows_below * j >= 8 * kParallelFlopThreshold) {
      parallel::for_each_index(rows_below, [&](std::size_t k) {
        std::size_t i = j + 1 + k;
        a(i, j) = cholesky_off_diag(a, i, j, inv);
      });
    } else {
      for (std::size_t i = j + 1; i < d; ++i)
        a(i, j) = cholesky_off_diag(a, i, j, inv);
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
  return true;
}

void solve_lower(const Matrix& l, std::span<const double> b,
                 std::span<double> x) {
  assert(l.rows == l.cols && b.size() == l.rows && x.size() == l.rows);
  for (std::size_t i = 0; i < l.rows; ++i) {
    double s = b[i] - dot_n(l.row(i), x.data(), i);
    x[i] = s / l(i, i);
  }
}

double quad_form_cholesky(const Matrix& l, std::span<const double> r) {
  Vec y(r.size());
  solve_lower(l, r, y);
  return dot_n(y.data(), y.data(), y.size());
}

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > m) m = x;
  if (!std::isfinite(m)) return m;  // all -inf (or empty)
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace hbn::kernels
