#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "hbn/datasim/record.hpp"
#include "hbn/discrete/variable.hpp"
#include "hbn/neural/checkpoint.hpp"
#include "hbn/neural/dense_net.hpp"

namespace hbn::classifier {

enum class Mode { Full, Ablated };

// Children modeled by per-parent-configuration text classifiers.
enum class Child { D0, D1, S0, S1, S2 };

std::string child_name(Child c);
std::size_t config_count(Child c);  // D0,D1,S0,S2: 2; S1: 4

struct TrainConfig {
  int epochs = 200;
  int batch_size = 256;
  double learning_rate = 1e-2;
  double weight_decay = 1e-3;
  double prior_learning_rate = 0.05;  // P(B) and, when ablated, the diagnosis rows
  double diagnosis_dropout = 0.7;
  double symptom_dropout = 0.0;
  std::size_t hidden = 256;  // width of the hidden layer in the pneu nets
  std::uint64_t seed = 0;
};

// One text classifier per (child, parent configuration): 12 nets in full
// mode. In ablated mode the diagnosis nets are replaced by plain per-season
// rows (2 logits each), leaving 8 nets. P(B) is a Bernoulli with one
// trainable logit. Trained banks are immutable and support concurrent
// posterior queries.
class ClassifierBank {
 public:
  ClassifierBank() = default;
  ClassifierBank(Mode mode, std::size_t dim, Vec empty_text,
                 const TrainConfig& cfg, Rng& init);

  Mode mode() const { return mode_; }
  std::size_t dim() const { return dim_; }
  const Vec& empty_text() const { return empty_text_; }

  double prior_b() const;                    // P(B = 1)
  double diag_row(int diagnosis, int b) const;  // ablated P(D_i = 1 | B = b)

  neural::DenseNet& net(Child child, std::size_t cfg);
  const neural::DenseNet& net(Child child, std::size_t cfg) const;
  bool has_net(Child child) const;

  // Flat slot view used by the trainer and the checkpoint writer.
  std::size_t net_slot(Child child, std::size_t cfg) const;
  std::size_t net_count() const { return nets_.size(); }
  neural::DenseNet& net_at(std::size_t slot) { return nets_[slot]; }
  const neural::DenseNet& net_at(std::size_t slot) const { return nets_[slot]; }

  // P(child = 1 | parent config, T = x), inference mode.
  double classifier_output(Child child, std::size_t cfg,
                           std::span<const double> x) const;

  double& prior_logit() { return prior_logit_; }
  std::array<std::array<double, 2>, 2>& diag_logits() { return diag_logits_; }

  void save(const std::filesystem::path& dir, std::uint64_t seed,
            const std::string& config_hash) const;
  static ClassifierBank load(const std::filesystem::path& dir);

 private:
  Mode mode_ = Mode::Full;
  std::size_t dim_ = 0;
  Vec empty_text_;
  double prior_logit_ = 0.0;
  std::array<std::array<double, 2>, 2> diag_logits_{};  // [diagnosis][b], ablated
  std::vector<neural::DenseNet> nets_;
};

// Named classifier outputs contributing to a posterior, for inspection.
struct PosteriorDetail {
  struct Entry {
    std::string label;
    double value;
  };
  std::vector<Entry> factors;
};

// Posterior over a diagnosis under the conditional factorization. A missing
// embedding is replaced by the bank's empty-text vector, making "no text" an
// ordinary conditioning value; the two calls are bit-identical. Unobserved
// symptoms contribute no factors. The ratio over the four diagnosis
// combinations is evaluated in log space.
Vec discr_posterior(const ClassifierBank& bank,
                    const discrete::Assignment& evidence, const Vec* embedding,
                    const std::string& query,
                    PosteriorDetail* detail = nullptr);

struct TrainResult {
  ClassifierBank bank;
  Vec epoch_loss;  // summed record losses per epoch
};

// Joint conditional-likelihood training: every record contributes one factor
// per observed child, routed through the net selected by the observed parent
// values. Masked symptoms contribute nothing, so a batch of symptom-masked
// records leaves every symptom net untouched. Deterministic per seed.
TrainResult train_bank(const std::vector<datasim::PatientRecord>& records,
                       const Vec& empty_text, const TrainConfig& cfg,
                       Mode mode);

}  // namespace hbn::classifier
