#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hbn/datasim/record.hpp"
#include "hbn/discrete/network.hpp"
#include "hbn/gaussian/gaussian.hpp"

namespace hbn::gaussian {

// Full mode keys a Gaussian on (pneu, inf, dysp, cough, nasal) -> 32
// conditions; ablated mode on (dysp, cough, nasal) -> 8.
enum class BankMode { Full, Ablated };

std::size_t condition_count(BankMode mode);
std::size_t condition_index(BankMode mode, int d0, int d1, int s0, int s1, int s2);
std::string condition_key(BankMode mode, std::size_t index);  // e.g. "01011"

// Bank of conditional Gaussians P(T | condition) plus a pooled fallback
// fitted to every text-carrying record. Conditions with fewer than two
// usable records receive the pooled parameters and are flagged. Immutable
// once fitted; concurrent queries are safe.
class GaussianBank {
 public:
  GaussianBank() = default;

  // Records without text are excluded; records with masked symptoms
  // contribute to the pooled fallback only.
  static GaussianBank fit(const std::vector<datasim::PatientRecord>& records,
                          double alpha, BankMode mode, bool diagonal = false);

  BankMode mode() const { return mode_; }
  std::size_t dim() const { return pooled_.dim(); }
  double alpha() const { return alpha_; }

  const GaussianParams& condition(std::size_t index) const {
    return conditions_[index];
  }
  bool is_fallback(std::size_t index) const { return fallback_[index]; }
  const GaussianParams& pooled() const { return pooled_; }

  double log_density_for(int d0, int d1, int s0, int s1, int s2,
                         std::span<const double> x) const;

  // Binary checkpoint (per condition: mean then covariance row-major, pooled
  // last) plus a JSON sidecar with keys, counts, alpha and fallback flags.
  void save(const std::filesystem::path& bin_path) const;
  static GaussianBank load(const std::filesystem::path& bin_path);

 private:
  BankMode mode_ = BankMode::Full;
  double alpha_ = 0.0;
  std::vector<GaussianParams> conditions_;
  std::vector<bool> fallback_;
  GaussianParams pooled_;
};

// Posterior P(query | evidence [, text]) for the generative hybrid model:
// the discrete joint times, when an embedding is given, the conditional text
// density. Sums over unobserved discrete variables run in log space.
// Without text the conditional text term integrates to one and the result
// matches the plain discrete posterior. Evidence may contain season and the
// three coded symptoms only; query is a diagnosis.
//
// `text_log_offset` adds a common constant to every conditional text
// log-density; by the ratio structure of the posterior the result is
// invariant to it (exercised by the property tests).
Vec gen_posterior(const GaussianBank& bank, const discrete::DiscreteBn& bn,
                  const discrete::Assignment& evidence, const Vec* embedding,
                  const std::string& query, double text_log_offset = 0.0);

}  // namespace hbn::gaussian
