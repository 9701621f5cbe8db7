#include "hbn/classifier/bank.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "hbn/core/errors.hpp"
#include "hbn/core/kernels.hpp"

namespace hbn::classifier {

namespace clinic = datasim::clinic;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bernoulli_log(double p1, int value) {
  double p = value == 1 ? p1 : 1.0 - p1;
  return std::log(p);
}

}  // namespace

std::string child_name(Child c) {
  switch (c) {
    case Child::D0: return "d0";
    case Child::D1: return "d1";
    case Child::S0: return "s0";
    case Child::S1: return "s1";
    case Child::S2: return "s2";
  }
  return "";
}

std::size_t config_count(Child c) { return c == Child::S1 ? 4 : 2; }

ClassifierBank::ClassifierBank(Mode mode, std::size_t dim, Vec empty_text,
                               const TrainConfig& cfg, Rng& init)
    : mode_(mode), dim_(dim), empty_text_(std::move(empty_text)) {
  if (empty_text_.size() != dim_)
    throw std::invalid_argument("empty-text vector dimension mismatch");

  using neural::Activation;
  using neural::LayerSpec;
  auto deep = [&](double dropout) {
    return std::vector<LayerSpec>{
        {dim_, cfg.hidden, Activation::Relu, dropout},
        {cfg.hidden, 1, Activation::Sigmoid, dropout}};
  };
  auto shallow = [&](double dropout) {
    return std::vector<LayerSpec>{{dim_, 1, Activation::Sigmoid, dropout}};
  };

  // Net layout mirrors the factorization; init draws happen in slot order so
  // seeds reproduce. D0 nets carry the hidden layer, every other family is a
  // single sigmoid layer.
  if (mode_ == Mode::Full) {
    for (std::size_t b = 0; b < 2; ++b)
      nets_.emplace_back(deep(cfg.diagnosis_dropout), init);
    for (std::size_t b = 0; b < 2; ++b)
      nets_.emplace_back(shallow(cfg.diagnosis_dropout), init);
  }
  for (std::size_t i = 0; i < 2; ++i)
    nets_.emplace_back(shallow(cfg.symptom_dropout), init);  // S0 | D0
  for (std::size_t i = 0; i < 4; ++i)
    nets_.emplace_back(shallow(cfg.symptom_dropout), init);  // S1 | D0,D1
  for (std::size_t i = 0; i < 2; ++i)
    nets_.emplace_back(shallow(cfg.symptom_dropout), init);  // S2 | D1
}

std::size_t ClassifierBank::net_slot(Child child, std::size_t cfg) const {
  if (cfg >= config_count(child))
    throw std::invalid_argument("bad parent configuration for " + child_name(child));
  std::size_t base = 0;
  auto offset_of = [&](Child c) {
    std::size_t off = base;
    base += config_count(c);
    return off;
  };
  std::size_t off_d0 = 0, off_d1 = 0;
  if (mode_ == Mode::Full) {
    off_d0 = offset_of(Child::D0);
    off_d1 = offset_of(Child::D1);
  }
  std::size_t off_s0 = offset_of(Child::S0);
  std::size_t off_s1 = offset_of(Child::S1);
  std::size_t off_s2 = offset_of(Child::S2);
  switch (child) {
    case Child::D0:
      if (mode_ == Mode::Ablated)
        throw std::invalid_argument("ablated bank has no diagnosis nets");
      return off_d0 + cfg;
    case Child::D1:
      if (mode_ == Mode::Ablated)
        throw std::invalid_argument("ablated bank has no diagnosis nets");
      return off_d1 + cfg;
    case Child::S0: return off_s0 + cfg;
    case Child::S1: return off_s1 + cfg;
    case Child::S2: return off_s2 + cfg;
  }
  throw std::invalid_argument("bad child");
}

bool ClassifierBank::has_net(Child child) const {
  return mode_ == Mode::Full || (child != Child::D0 && child != Child::D1);
}

neural::DenseNet& ClassifierBank::net(Child child, std::size_t cfg) {
  return nets_[net_slot(child, cfg)];
}

const neural::DenseNet& ClassifierBank::net(Child child, std::size_t cfg) const {
  return nets_[net_slot(child, cfg)];
}

double ClassifierBank::prior_b() const { return sigmoid(prior_logit_); }

double ClassifierBank::diag_row(int diagnosis, int b) const {
  return sigmoid(diag_logits_[static_cast<std::size_t>(diagnosis)]
                             [static_cast<std::size_t>(b)]);
}

double ClassifierBank::classifier_output(Child child, std::size_t cfg,
                                         std::span<const double> x) const {
  return neural::forward(net(child, cfg), x);
}

Vec discr_posterior(const ClassifierBank& bank,
                    const discrete::Assignment& evidence, const Vec* embedding,
                    const std::string& query, PosteriorDetail* detail) {
  int diagnosis;
  if (query == clinic::kPneu)
    diagnosis = 0;
  else if (query == clinic::kInf)
    diagnosis = 1;
  else
    throw std::invalid_argument("query must be a diagnosis, got " + query);

  static const std::set<std::string> allowed = {clinic::kSeason, clinic::kDysp,
                                                clinic::kCough, clinic::kNasal};
  for (const auto& [name, value] : evidence.entries()) {
    if (!allowed.count(name))
      throw std::invalid_argument("evidence variable " + name +
                                  " is not usable by this model");
    if (value < 0 || value > 1)
      throw std::invalid_argument("level index out of range for " + name);
  }

  // Absent text conditions on the designated empty-text embedding (the
  // substitution, not a separate code path, is what makes the two queries
  // bit-identical).
  const Vec& x = embedding ? *embedding : bank.empty_text();
  if (x.size() != bank.dim())
    throw std::invalid_argument("embedding size " + std::to_string(x.size()) +
                                ", expected " + std::to_string(bank.dim()));

  auto b_ev = evidence.get(clinic::kSeason);
  auto s_ev = std::array{evidence.get(clinic::kDysp), evidence.get(clinic::kCough),
                         evidence.get(clinic::kNasal)};

  // Evaluate each needed classifier once.
  auto note = [&](const std::string& label, double value) {
    if (detail) detail->factors.push_back({label, value});
  };
  std::array<std::array<double, 2>, 2> p_diag{};  // [diagnosis][b]
  for (int b = 0; b < 2; ++b) {
    if (b_ev && *b_ev != b) continue;
    if (bank.mode() == Mode::Full) {
      p_diag[0][b] = bank.classifier_output(Child::D0, static_cast<std::size_t>(b), x);
      p_diag[1][b] = bank.classifier_output(Child::D1, static_cast<std::size_t>(b), x);
      note("P(pneu=1|season=" + std::to_string(b) + ",T)", p_diag[0][b]);
      note("P(inf=1|season=" + std::to_string(b) + ",T)", p_diag[1][b]);
    } else {
      p_diag[0][b] = bank.diag_row(0, b);
      p_diag[1][b] = bank.diag_row(1, b);
      note("P(pneu=1|season=" + std::to_string(b) + ")", p_diag[0][b]);
      note("P(inf=1|season=" + std::to_string(b) + ")", p_diag[1][b]);
    }
  }
  std::array<double, 2> p_s0{}, p_s2{};
  std::array<double, 4> p_s1{};
  if (s_ev[0])
    for (int d0 = 0; d0 < 2; ++d0) {
      p_s0[d0] = bank.classifier_output(Child::S0, static_cast<std::size_t>(d0), x);
      note("P(dysp=1|pneu=" + std::to_string(d0) + ",T)", p_s0[d0]);
    }
  if (s_ev[1])
    for (int d0 = 0; d0 < 2; ++d0)
      for (int d1 = 0; d1 < 2; ++d1) {
        std::size_t cfg = static_cast<std::size_t>(d0 * 2 + d1);
        p_s1[cfg] = bank.classifier_output(Child::S1, cfg, x);
        note("P(cough=1|pneu=" + std::to_string(d0) + ",inf=" +
                 std::to_string(d1) + ",T)",
             p_s1[cfg]);
      }
  if (s_ev[2])
    for (int d1 = 0; d1 < 2; ++d1) {
      p_s2[d1] = bank.classifier_output(Child::S2, static_cast<std::size_t>(d1), x);
      note("P(nasal=1|inf=" + std::to_string(d1) + ",T)", p_s2[d1]);
    }

  // Log-space sum over the unobserved among {B, D0, D1}; unobserved symptom
  // factors sum to one and are dropped.
  Vec scores_q1, scores_all;
  for (int b = 0; b < 2; ++b) {
    if (b_ev && *b_ev != b) continue;
    double base = b_ev ? 0.0 : bernoulli_log(bank.prior_b(), b);
    for (int d0 = 0; d0 < 2; ++d0)
      for (int d1 = 0; d1 < 2; ++d1) {
        double ls = base;
        ls += bernoulli_log(p_diag[0][b], d0);
        ls += bernoulli_log(p_diag[1][b], d1);
        if (s_ev[0]) ls += bernoulli_log(p_s0[d0], *s_ev[0]);
        if (s_ev[1]) ls += bernoulli_log(p_s1[static_cast<std::size_t>(d0 * 2 + d1)], *s_ev[1]);
        if (s_ev[2]) ls += bernoulli_log(p_s2[d1], *s_ev[2]);
        scores_all.push_back(ls);
        if ((diagnosis == 0 ? d0 : d1) == 1) scores_q1.push_back(ls);
      }
  }

  double denom = kernels::log_sum_exp(scores_all);
  if (!std::isfinite(denom))
    throw ZeroEvidenceError("posterior denominator is zero");
  double num = kernels::log_sum_exp(scores_q1);
  double p1 = std::isfinite(num) ? std::exp(num - denom) : 0.0;
  return {1.0 - p1, p1};
}

void ClassifierBank::save(const std::filesystem::path& dir, std::uint64_t seed,
                          const std::string& config_hash) const {
  std::filesystem::create_directories(dir);
  nlohmann::json nets = nlohmann::json::array();
  auto dump_family = [&](Child child) {
    for (std::size_t cfg = 0; cfg < config_count(child); ++cfg) {
      std::string file = "net_" + child_name(child) + "_" + std::to_string(cfg) + ".bin";
      neural::save_net(net(child, cfg), seed, dir / file);
      nets.push_back({{"child", child_name(child)}, {"config", cfg}, {"file", file}});
    }
  };
  if (mode_ == Mode::Full) {
    dump_family(Child::D0);
    dump_family(Child::D1);
  }
  dump_family(Child::S0);
  dump_family(Child::S1);
  dump_family(Child::S2);

  nlohmann::json manifest = {
      {"model", "discr"},
      {"mode", mode_ == Mode::Full ? "full" : "ablated"},
      {"dim", dim_},
      {"prior_logit", prior_logit_},
      {"empty_text", empty_text_},
      {"nets", nets},
      {"seed", seed},
      {"config_hash", config_hash}};
  if (mode_ == Mode::Ablated)
    manifest["diag_logits"] = {{diag_logits_[0][0], diag_logits_[0][1]},
                               {diag_logits_[1][0], diag_logits_[1][1]}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << "\n";
}

ClassifierBank ClassifierBank::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in)
    throw std::runtime_error("missing manifest " + (dir / "manifest.json").string());
  nlohmann::json manifest = nlohmann::json::parse(in);

  ClassifierBank bank;
  bank.mode_ = manifest.at("mode").get<std::string>() == "full" ? Mode::Full
                                                                : Mode::Ablated;
  bank.dim_ = manifest.at("dim").get<std::size_t>();
  bank.empty_text_ = manifest.at("empty_text").get<Vec>();
  bank.prior_logit_ = manifest.at("prior_logit").get<double>();
  if (bank.mode_ == Mode::Ablated) {
    auto dl = manifest.at("diag_logits");
    for (int i = 0; i < 2; ++i)
      for (int b = 0; b < 2; ++b) bank.diag_logits_[i][b] = dl[i][b].get<double>();
  }
  for (const auto& n : manifest.at("nets"))
    bank.nets_.push_back(
        neural::load_net(dir / n.at("file").get<std::string>()).net);
  return bank;
}

}  // namespace hbn::classifier
