#pragma once

#include <filesystem>

#include "hbn/datasim/record.hpp"
#include "hbn/ff/encoding.hpp"
#include "hbn/neural/dense_net.hpp"

namespace hbn::ff {

// Which parts of a record feed the classifier: the full input, the
// empty-text substitution, or the all-unobserved symptom substitution.
enum class EvidenceMode { Full, NoText, NoSymptoms };

struct FfConfig {
  bool interactions = false;
  std::size_t hidden = 256;  // 0 = single layer
  double dropout = 0.7;
  int epochs = 200;
  int batch_size = 256;
  double learning_rate = 1e-2;
  double weight_decay = 1e-3;
  std::uint64_t seed = 0;
};

// The tuned configurations: the pneumonia classifier is two layers without
// interaction features, the infection classifier one layer with them.
FfConfig ff_default_config(int diagnosis);

// Monolithic classifier over one-hot tabular features concatenated with the
// text embedding.
class FfModel {
 public:
  FfModel() = default;
  FfModel(neural::DenseNet net, bool interactions, Vec empty_text);

  double predict(const datasim::PatientRecord& rec, EvidenceMode mode) const;

  Vec build_input(const datasim::PatientRecord& rec, EvidenceMode mode) const;

  const neural::DenseNet& net() const { return net_; }
  neural::DenseNet& net() { return net_; }
  bool interactions() const { return interactions_; }
  const Vec& empty_text() const { return empty_text_; }
  std::size_t embedding_dim() const { return empty_text_.size(); }

  void save(const std::filesystem::path& dir, const std::string& name,
            std::uint64_t seed) const;
  static FfModel load(const std::filesystem::path& dir, const std::string& name);

 private:
  neural::DenseNet net_;
  bool interactions_ = false;
  Vec empty_text_;
};

struct FfTrainResult {
  FfModel model;
  Vec epoch_loss;
};

// BCE training of one diagnosis classifier (0 = pneu, 1 = inf). Masked
// symptoms activate the unobserved slots; missing text uses the empty-text
// embedding. Deterministic per seed.
FfTrainResult train_ff(const std::vector<datasim::PatientRecord>& records,
                       const Vec& empty_text, int diagnosis,
                       const FfConfig& cfg);

}  // namespace hbn::ff
