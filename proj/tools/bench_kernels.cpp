// Compares the OpenMP kernels against the serial reference path and checks
// that both produce identical bits. Sizes roughly match the d=768 workload.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "hbn/core/kernels.hpp"
#include "hbn/core/parallel.hpp"
#include "hbn/core/rng.hpp"
#include "hbn/datasim/record.hpp"
#include "hbn/ff/model.hpp"

using namespace hbn;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_ms(int reps, Fn&& fn) {
  double t0 = now_ms();
  for (int r = 0; r < reps; ++r) fn();
  return (now_ms() - t0) / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              equal ? "bit-identical" : "MISMATCH");
}

bool same_bits(const Vec& a, const Vec& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", parallel::max_threads());
  Rng rng(12345);

  {
    const std::size_t rows = 256, cols = 768;
    Matrix w(rows, cols);
    for (double& x : w.data) x = rng.normal();
    Vec x(cols), bias(rows, 0.1), out_s(rows), out_p(rows);
    for (double& v : x) v = rng.normal();

    parallel::set_enabled(false);
    double ts = time_ms(2000, [&] { kernels::affine(w, x, bias, out_s); });
    parallel::set_enabled(true);
    double tp = time_ms(2000, [&] { kernels::affine(w, x, bias, out_p); });
    report("affine 256x768", ts, tp, same_bits(out_s, out_p));
  }

  {
    const std::size_t n = 1500, d = 256;
    Matrix samples(n, d);
    for (double& x : samples.data) x = rng.normal();
    Vec mean_s, mean_p;
    Matrix cov_s, cov_p;

    parallel::set_enabled(false);
    double ts = time_ms(3, [&] { kernels::mean_and_covariance(samples, mean_s, cov_s); });
    parallel::set_enabled(true);
    double tp = time_ms(3, [&] { kernels::mean_and_covariance(samples, mean_p, cov_p); });
    report("covariance 1500x256", ts, tp,
           same_bits(mean_s, mean_p) && same_bits(cov_s.data, cov_p.data));
  }

  {
    const std::size_t d = 512;
    Matrix base(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) base(i, j) = 0.01 * rng.normal();
      base(i, i) += 4.0;
    }
    // Symmetrize so the factorization target is well defined.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) base(j, i) = base(i, j);

    Matrix a_s, a_p;
    parallel::set_enabled(false);
    double ts = time_ms(5, [&] {
      a_s = base;
      kernels::cholesky_in_place(a_s);
    });
    parallel::set_enabled(true);
    double tp = time_ms(5, [&] {
      a_p = base;
      kernels::cholesky_in_place(a_p);
    });
    report("cholesky 512", ts, tp, same_bits(a_s.data, a_p.data));
  }

  {
    // One training run of the feed-forward baseline: block-parallel batches.
    std::vector<datasim::PatientRecord> records;
    Rng data(7);
    const std::size_t dim = 64;
    for (int i = 0; i < 1024; ++i) {
      datasim::PatientRecord r;
      r.id = i;
      r.season = data.bernoulli(0.5);
      r.pneu = data.bernoulli(0.2);
      r.inf = data.bernoulli(0.4);
      r.dysp = data.bernoulli(0.5);
      r.cough = data.bernoulli(0.5);
      r.nasal = data.bernoulli(0.5);
      r.text_present = true;
      r.embedding.resize(dim);
      for (double& x : r.embedding) x = data.normal() + (r.pneu ? 1.0 : 0.0);
      records.push_back(std::move(r));
    }
    Vec empty_text(dim, 0.0);
    ff::FfConfig cfg = ff::ff_default_config(0);
    cfg.epochs = 20;
    cfg.seed = 3;

    parallel::set_enabled(false);
    double t0 = now_ms();
    auto serial_run = ff::train_ff(records, empty_text, 0, cfg);
    double ts = now_ms() - t0;
    parallel::set_enabled(true);
    t0 = now_ms();
    auto parallel_run = ff::train_ff(records, empty_text, 0, cfg);
    double tp = now_ms() - t0;

    bool equal = true;
    const auto& ls = serial_run.model.net().layers();
    const auto& lp = parallel_run.model.net().layers();
    for (std::size_t l = 0; l < ls.size(); ++l)
      equal = equal && same_bits(ls[l].w.data, lp[l].w.data) &&
              same_bits(ls[l].b, lp[l].b);
    report("ff training epoch x20", ts, tp, equal);
  }
  return 0;
}
