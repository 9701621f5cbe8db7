#include "hbn/ff/model.hpp"

#include <fstream>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

#include "hbn/core/parallel.hpp"
#include "hbn/neural/adam.hpp"
#include "hbn/neural/checkpoint.hpp"

namespace hbn::ff {

using datasim::PatientRecord;

FfConfig ff_default_config(int diagnosis) {
  FfConfig cfg;
  if (diagnosis == 0) {
    cfg.interactions = false;
    cfg.hidden = 256;
  } else {
    cfg.interactions = true;
    cfg.hidden = 0;
  }
  return cfg;
}

FfModel::FfModel(neural::DenseNet net, bool interactions, Vec empty_text)
    : net_(std::move(net)),
      interactions_(interactions),
      empty_text_(std::move(empty_text)) {}

Vec FfModel::build_input(const PatientRecord& rec, EvidenceMode mode) const {
  int dysp = rec.dysp, cough = rec.cough, nasal = rec.nasal;
  if (mode == EvidenceMode::NoSymptoms) dysp = cough = nasal = -1;
  TabularEncoding enc = encode(rec.season, dysp, cough, nasal, interactions_);

  const Vec* text = &empty_text_;
  if (mode != EvidenceMode::NoText && rec.text_present && !rec.embedding.empty())
    text = &rec.embedding;
  if (text->size() != empty_text_.size())
    throw std::invalid_argument("embedding dimension mismatch");

  Vec input;
  input.reserve(enc.base.size() + enc.interactions.size() + text->size());
  input.insert(input.end(), enc.base.begin(), enc.base.end());
  input.insert(input.end(), enc.interactions.begin(), enc.interactions.end());
  input.insert(input.end(), text->begin(), text->end());
  return input;
}

double FfModel::predict(const PatientRecord& rec, EvidenceMode mode) const {
  return neural::forward(net_, build_input(rec, mode));
}

void FfModel::save(const std::filesystem::path& dir, const std::string& name,
                   std::uint64_t seed) const {
  std::filesystem::create_directories(dir);
  neural::save_net(net_, seed, dir / (name + ".bin"));
  nlohmann::json meta = {{"interactions", interactions_},
                         {"empty_text", empty_text_}};
  std::ofstream out(dir / (name + ".meta.json"));
  if (!out)
    throw std::runtime_error("cannot write " + (dir / (name + ".meta.json")).string());
  out << meta.dump(2) << "\n";
}

FfModel FfModel::load(const std::filesystem::path& dir, const std::string& name) {
  std::ifstream in(dir / (name + ".meta.json"));
  if (!in)
    throw std::runtime_error("missing model metadata " +
                             (dir / (name + ".meta.json")).string());
  nlohmann::json meta = nlohmann::json::parse(in);
  return FfModel(neural::load_net(dir / (name + ".bin")).net,
                 meta.at("interactions").get<bool>(),
                 meta.at("empty_text").get<Vec>());
}

FfTrainResult train_ff(const std::vector<PatientRecord>& records,
                       const Vec& empty_text, int diagnosis,
                       const FfConfig& cfg) {
  if (diagnosis != 0 && diagnosis != 1)
    throw std::invalid_argument("diagnosis must be 0 (pneu) or 1 (inf)");
  const std::size_t tab_dims =
      kBaseDims + (cfg.interactions ? kInteractionDims : 0);
  const std::size_t in_dims = tab_dims + empty_text.size();

  using neural::Activation;
  using neural::LayerSpec;
  std::vector<LayerSpec> spec;
  if (cfg.hidden > 0) {
    spec.push_back({in_dims, cfg.hidden, Activation::Relu, cfg.dropout});
    spec.push_back({cfg.hidden, 1, Activation::Sigmoid, cfg.dropout});
  } else {
    spec.push_back({in_dims, 1, Activation::Sigmoid, cfg.dropout});
  }
  Rng init = Rng::substream(cfg.seed, "init");
  FfModel model(neural::DenseNet(spec, init), cfg.interactions, empty_text);

  // Inputs are fixed across epochs; build them once.
  std::vector<Vec> inputs;
  std::vector<int> labels;
  inputs.reserve(records.size());
  for (const auto& r : records) {
    inputs.push_back(model.build_input(r, EvidenceMode::Full));
    labels.push_back(diagnosis == 0 ? r.pneu : r.inf);
  }

  neural::AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;
  adam.weight_decay = cfg.weight_decay;
  neural::AdamState opt(model.net(), adam);

  constexpr std::size_t kBlock = 32;
  const std::size_t n = records.size();
  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t max_blocks = (batch_size + kBlock - 1) / kBlock;

  struct Block {
    neural::GradSet grad;
    double loss = 0.0;
    neural::ForwardTrace trace;
  };
  std::vector<Block> blocks(std::max<std::size_t>(max_blocks, 1));
  for (auto& b : blocks) b.grad = model.net().make_grad();
  neural::GradSet accum = model.net().make_grad();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = Rng::substream(cfg.seed, "shuffle");
  const std::uint64_t dropout_seed =
      Rng::mix(cfg.seed, Rng::hash_label("dropout"));

  FfTrainResult result{std::move(model), {}};
  neural::DenseNet& net = result.model.net();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng er = shuffle_rng.fork(static_cast<std::uint64_t>(epoch));
    er.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t batch_n = std::min(batch_size, n - start);
      const std::size_t n_blocks = (batch_n + kBlock - 1) / kBlock;

      parallel::for_each_index(n_blocks, [&](std::size_t bi) {
        Block& blk = blocks[bi];
        blk.grad.zero();
        blk.loss = 0.0;
        const std::size_t lo = bi * kBlock;
        const std::size_t hi = std::min(lo + kBlock, batch_n);
        for (std::size_t off = lo; off < hi; ++off) {
          const std::size_t pos = start + off;
          const std::size_t idx = order[pos];
          Rng drop(Rng::mix(Rng::mix(dropout_seed,
                                     static_cast<std::uint64_t>(epoch)),
                            pos));
          neural::forward_train(net, inputs[idx], drop, blk.trace);
          blk.loss += neural::bce_backward(net, blk.trace, labels[idx], 1.0,
                                           blk.grad);
        }
      });

      accum.zero();
      for (std::size_t bi = 0; bi < n_blocks; ++bi) accum.add(blocks[bi].grad);
      accum.scale(1.0 / static_cast<double>(batch_n));
      opt.step(net, accum);
      for (std::size_t bi = 0; bi < n_blocks; ++bi) epoch_loss += blocks[bi].loss;
    }
    result.epoch_loss.push_back(epoch_loss);
  }
  return result;
}

}  // namespace hbn::ff
