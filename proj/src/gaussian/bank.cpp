#include "hbn/gaussian/bank.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "hbn/core/errors.hpp"
#include "hbn/core/kernels.hpp"

namespace hbn::gaussian {

namespace clinic = datasim::clinic;

std::size_t condition_count(BankMode mode) {
  return mode == BankMode::Full ? 32 : 8;
}

std::size_t condition_index(BankMode mode, int d0, int d1, int s0, int s1,
                            int s2) {
  std::size_t sym = static_cast<std::size_t>(s0) * 4 +
                    static_cast<std::size_t>(s1) * 2 +
                    static_cast<std::size_t>(s2);
  if (mode == BankMode::Ablated) return sym;
  return (static_cast<std::size_t>(d0) * 2 + static_cast<std::size_t>(d1)) * 8 +
         sym;
}

std::string condition_key(BankMode mode, std::size_t index) {
  std::size_t bits = mode == BankMode::Full ? 5 : 3;
  std::string key(bits, '0');
  for (std::size_t b = 0; b < bits; ++b)
    if (index & (std::size_t{1} << (bits - 1 - b))) key[b] = '1';
  return key;
}

GaussianBank GaussianBank::fit(
    const std::vector<datasim::PatientRecord>& records, double alpha,
    BankMode mode, bool diagonal) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");

  std::size_t dim = 0;
  std::vector<const Vec*> pooled_rows;
  std::vector<std::vector<const Vec*>> bucket_rows(condition_count(mode));
  for (const auto& r : records) {
    if (!r.text_present || r.embedding.empty()) continue;  // no text to fit
    if (dim == 0) dim = r.embedding.size();
    if (r.embedding.size() != dim)
      throw std::invalid_argument("inconsistent embedding dimension in records");
    pooled_rows.push_back(&r.embedding);
    if (r.dysp < 0 || r.cough < 0 || r.nasal < 0) continue;  // masked symptoms
    bucket_rows[condition_index(mode, r.pneu, r.inf, r.dysp, r.cough, r.nasal)]
        .push_back(&r.embedding);
  }
  if (pooled_rows.empty())
    throw std::invalid_argument("no text-carrying records to fit");

  auto to_matrix = [dim](const std::vector<const Vec*>& rows) {
    Matrix m(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = (*rows[i])[j];
    return m;
  };

  GaussianBank bank;
  bank.mode_ = mode;
  bank.alpha_ = alpha;
  bank.pooled_ = GaussianParams::fit(to_matrix(pooled_rows), alpha, diagonal);
  bank.conditions_.resize(condition_count(mode));
  bank.fallback_.assign(condition_count(mode), false);
  for (std::size_t c = 0; c < bank.conditions_.size(); ++c) {
    if (bucket_rows[c].size() < 2) {
      bank.conditions_[c] = bank.pooled_;
      bank.fallback_[c] = true;
    } else {
      bank.conditions_[c] =
          GaussianParams::fit(to_matrix(bucket_rows[c]), alpha, diagonal);
    }
  }
  return bank;
}

double GaussianBank::log_density_for(int d0, int d1, int s0, int s1, int s2,
                                     std::span<const double> x) const {
  return conditions_[condition_index(mode_, d0, d1, s0, s1, s2)].log_density(x);
}

void GaussianBank::save(const std::filesystem::path& bin_path) const {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  auto write_params = [&](const GaussianParams& g) {
    out.write(reinterpret_cast<const char*>(g.mean().data()),
              static_cast<std::streamsize>(g.dim() * sizeof(double)));
    if (g.diagonal())
      out.write(reinterpret_cast<const char*>(g.variance().data()),
                static_cast<std::streamsize>(g.dim() * sizeof(double)));
    else
      out.write(reinterpret_cast<const char*>(g.covariance().data.data()),
                static_cast<std::streamsize>(g.dim() * g.dim() * sizeof(double)));
  };
  for (const auto& c : conditions_) write_params(c);
  write_params(pooled_);
  if (!out) throw std::runtime_error("write failed for " + bin_path.string());

  nlohmann::json conds = nlohmann::json::array();
  for (std::size_t c = 0; c < conditions_.size(); ++c)
    conds.push_back({{"key", condition_key(mode_, c)},
                     {"count", conditions_[c].sample_count()},
                     {"fallback", static_cast<bool>(fallback_[c])}});
  nlohmann::json sidecar = {
      {"mode", mode_ == BankMode::Full ? "full" : "ablated"},
      {"key_fields", mode_ == BankMode::Full
                         ? std::vector<std::string>{clinic::kPneu, clinic::kInf,
                                                    clinic::kDysp, clinic::kCough,
                                                    clinic::kNasal}
                         : std::vector<std::string>{clinic::kDysp, clinic::kCough,
                                                    clinic::kNasal}},
      {"alpha", alpha_},
      {"dim", dim()},
      {"layout", pooled_.diagonal() ? "diagonal" : "full"},
      {"conditions", conds},
      {"pooled_count", pooled_.sample_count()}};
  std::filesystem::path sc = bin_path;
  sc += ".json";
  std::ofstream js(sc);
  if (!js) throw std::runtime_error("cannot write " + sc.string());
  js << sidecar.dump(2) << "\n";
}

GaussianBank GaussianBank::load(const std::filesystem::path& bin_path) {
  std::filesystem::path sc = bin_path;
  sc += ".json";
  std::ifstream js(sc);
  if (!js) throw std::runtime_error("missing bank sidecar " + sc.string());
  nlohmann::json sidecar = nlohmann::json::parse(js);

  GaussianBank bank;
  bank.mode_ = sidecar.at("mode").get<std::string>() == "full" ? BankMode::Full
                                                               : BankMode::Ablated;
  bank.alpha_ = sidecar.at("alpha").get<double>();
  const std::size_t d = sidecar.at("dim").get<std::size_t>();
  const bool diagonal = sidecar.at("layout").get<std::string>() == "diagonal";
  const auto& conds = sidecar.at("conditions");
  if (conds.size() != condition_count(bank.mode_))
    throw std::runtime_error(bin_path.string() + ": wrong condition count");

  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + bin_path.string());
  auto read_params = [&](std::size_t count) {
    Vec mean(d);
    in.read(reinterpret_cast<char*>(mean.data()),
            static_cast<std::streamsize>(d * sizeof(double)));
    if (diagonal) {
      Vec var(d);
      in.read(reinterpret_cast<char*>(var.data()),
              static_cast<std::streamsize>(d * sizeof(double)));
      return GaussianParams::from_diagonal_moments(std::move(mean), std::move(var),
                                                   bank.alpha_, count);
    }
    Matrix cov(d, d);
    in.read(reinterpret_cast<char*>(cov.data.data()),
            static_cast<std::streamsize>(d * d * sizeof(double)));
    return GaussianParams::from_moments(std::move(mean), std::move(cov),
                                        bank.alpha_, count);
  };
  for (const auto& c : conds) {
    bank.conditions_.push_back(read_params(c.at("count").get<std::size_t>()));
    bank.fallback_.push_back(c.at("fallback").get<bool>());
  }
  bank.pooled_ = read_params(sidecar.at("pooled_count").get<std::size_t>());
  if (!in) throw std::runtime_error(bin_path.string() + ": truncated bank file");
  return bank;
}

Vec gen_posterior(const GaussianBank& bank, const discrete::DiscreteBn& bn,
                  const discrete::Assignment& evidence, const Vec* embedding,
                  const std::string& query, double text_log_offset) {
  if (query != clinic::kPneu && query != clinic::kInf)
    throw std::invalid_argument("query must be a diagnosis, got " + query);
  static const std::set<std::string> allowed = {clinic::kSeason, clinic::kDysp,
                                                clinic::kCough, clinic::kNasal};
  for (const auto& [name, value] : evidence.entries()) {
    (void)value;
    if (!allowed.count(name))
      throw std::invalid_argument("evidence variable " + name +
                                  " is not usable by this model");
  }

  const int qi = bn.variable_index(query);
  const int pneu_i = bn.variable_index(clinic::kPneu);
  const int inf_i = bn.variable_index(clinic::kInf);
  const int dysp_i = bn.variable_index(clinic::kDysp);
  const int cough_i = bn.variable_index(clinic::kCough);
  const int nasal_i = bn.variable_index(clinic::kNasal);
  if (qi < 0 || pneu_i < 0 || inf_i < 0 || dysp_i < 0 || cough_i < 0 ||
      nasal_i < 0)
    throw std::invalid_argument("network is missing a required variable");

  std::vector<int> levels = bn.to_levels(evidence);
  std::vector<std::size_t> free_vars;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 0) free_vars.push_back(i);

  const std::size_t q_card = bn.variables()[static_cast<std::size_t>(qi)].cardinality();

  // Without text the conditional text density integrates out, so only the
  // discrete product remains and plain probabilities are enough. With text
  // each completion picks up its condition's log density.
  Vec mass(q_card, 0.0);
  std::vector<Vec> log_scores(q_card);
  for (std::size_t f : free_vars) levels[f] = 0;
  while (true) {
    double disc = bn.joint_prob_levels(levels);
    if (disc > 0.0) {
      std::size_t qv = static_cast<std::size_t>(levels[static_cast<std::size_t>(qi)]);
      if (embedding) {
        double ls = std::log(disc) + text_log_offset +
                    bank.log_density_for(levels[pneu_i], levels[inf_i],
                                         levels[dysp_i], levels[cough_i],
                                         levels[nasal_i], *embedding);
        log_scores[qv].push_back(ls);
      } else {
        mass[qv] += disc;
      }
    }
    std::size_t k = 0;
    for (; k < free_vars.size(); ++k) {
      std::size_t v = free_vars[k];
      if (static_cast<std::size_t>(++levels[v]) <
          bn.variables()[v].cardinality())
        break;
      levels[v] = 0;
    }
    if (k == free_vars.size()) break;
  }

  Vec result(q_card, 0.0);
  if (embedding) {
    Vec level_ls(q_card);
    for (std::size_t v = 0; v < q_card; ++v)
      level_ls[v] = kernels::log_sum_exp(log_scores[v]);
    double total = kernels::log_sum_exp(level_ls);
    if (!std::isfinite(total))
      throw ZeroEvidenceError("evidence has probability zero under the model");
    for (std::size_t v = 0; v < q_card; ++v)
      result[v] = std::exp(level_ls[v] - total);
  } else {
    double total = 0.0;
    for (double m : mass) total += m;
    if (total <= 0.0)
      throw ZeroEvidenceError("evidence has probability zero under the model");
    for (std::size_t v = 0; v < q_card; ++v) result[v] = mass[v] / total;
  }
  return result;
}

}  // namespace hbn::gaussian
