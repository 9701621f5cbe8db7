#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hbn/classifier/bank.hpp"
#include "hbn/core/parallel.hpp"
#include "hbn/neural/adam.hpp"

namespace hbn::classifier {

namespace {

using datasim::PatientRecord;
using neural::ForwardTrace;
using neural::GradSet;

// Batches are split into fixed-size blocks; each block accumulates its
// partial gradients independently and the partials are combined in block
// order. The block size is a constant, so training results do not depend on
// the number of threads.
constexpr std::size_t kBlock = 32;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct BlockBuffers {
  std::vector<GradSet> grads;         // one per net slot
  std::vector<long> touch;            // factor count per net slot
  double prior_grad = 0.0;
  std::array<std::array<double, 2>, 2> diag_grads{};
  double loss = 0.0;
  ForwardTrace trace;

  void init(const ClassifierBank& bank) {
    grads.clear();
    for (std::size_t s = 0; s < bank.net_count(); ++s)
      grads.push_back(bank.net_at(s).make_grad());
    touch.assign(bank.net_count(), 0);
  }

  void zero() {
    for (auto& g : grads) g.zero();
    std::fill(touch.begin(), touch.end(), 0);
    prior_grad = 0.0;
    diag_grads = {};
    loss = 0.0;
  }
};

}  // namespace

TrainResult train_bank(const std::vector<PatientRecord>& records,
                       const Vec& empty_text, const TrainConfig& cfg,
                       Mode mode) {
  const std::size_t dim = empty_text.size();
  if (dim == 0) throw std::invalid_argument("empty-text vector must be non-empty");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.pneu < 0 || r.inf < 0)
      throw std::invalid_argument("record " + std::to_string(i) +
                                  ": diagnoses must always be observed");
    if (r.text_present && r.embedding.size() != dim)
      throw std::invalid_argument("record " + std::to_string(i) +
                                  ": embedding dimension mismatch");
  }

  Rng init = Rng::substream(cfg.seed, "init");
  ClassifierBank bank(mode, dim, empty_text, cfg, init);

  neural::AdamConfig net_adam;
  net_adam.learning_rate = cfg.learning_rate;
  net_adam.weight_decay = cfg.weight_decay;
  std::vector<neural::AdamState> net_opts;
  for (std::size_t s = 0; s < bank.net_count(); ++s)
    net_opts.emplace_back(bank.net_at(s), net_adam);

  neural::AdamConfig prior_adam;
  prior_adam.learning_rate = cfg.prior_learning_rate;
  prior_adam.weight_decay = 0.0;
  neural::AdamScalar prior_opt(prior_adam);
  std::array<std::array<neural::AdamScalar, 2>, 2> diag_opts;
  for (auto& row : diag_opts)
    for (auto& o : row) o = neural::AdamScalar(prior_adam);

  const std::size_t n = records.size();
  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t max_blocks = (batch_size + kBlock - 1) / kBlock;
  std::vector<BlockBuffers> blocks(std::max<std::size_t>(max_blocks, 1));
  for (auto& b : blocks) b.init(bank);
  std::vector<GradSet> accum;
  for (std::size_t s = 0; s < bank.net_count(); ++s)
    accum.push_back(bank.net_at(s).make_grad());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = Rng::substream(cfg.seed, "shuffle");
  const std::uint64_t dropout_seed =
      Rng::mix(cfg.seed, Rng::hash_label("dropout"));

  TrainResult result{std::move(bank), {}};
  ClassifierBank& live = result.bank;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng er = shuffle_rng.fork(static_cast<std::uint64_t>(epoch));
    er.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t batch_n = std::min(batch_size, n - start);
      const std::size_t n_blocks = (batch_n + kBlock - 1) / kBlock;
      const double prior_p = sigmoid(live.prior_logit());

      parallel::for_each_index(n_blocks, [&](std::size_t bi) {
        BlockBuffers& buf = blocks[bi];
        buf.zero();
        const std::size_t lo = bi * kBlock;
        const std::size_t hi = std::min(lo + kBlock, batch_n);
        for (std::size_t off = lo; off < hi; ++off) {
          const std::size_t pos = start + off;  // position in the epoch order
          const PatientRecord& rec = records[order[pos]];
          Rng drop(Rng::mix(Rng::mix(dropout_seed,
                                     static_cast<std::uint64_t>(epoch)),
                            pos));
          const Vec& x = rec.text_present ? rec.embedding : empty_text;

          buf.loss += neural::bce_loss(prior_p, rec.season, 1.0);
          buf.prior_grad += prior_p - static_cast<double>(rec.season);

          auto net_factor = [&](Child child, std::size_t config, int label) {
            std::size_t s = live.net_slot(child, config);
            double p = neural::forward_train(live.net_at(s), x, drop, buf.trace);
            (void)p;
            buf.loss += neural::bce_backward(live.net_at(s), buf.trace, label,
                                             1.0, buf.grads[s]);
            buf.touch[s] += 1;
          };

          const std::size_t b = static_cast<std::size_t>(rec.season);
          if (mode == Mode::Full) {
            net_factor(Child::D0, b, rec.pneu);
            net_factor(Child::D1, b, rec.inf);
          } else {
            for (int i = 0; i < 2; ++i) {
              int label = i == 0 ? rec.pneu : rec.inf;
              double p = sigmoid(live.diag_logits()[i][b]);
              buf.loss += neural::bce_loss(p, label, 1.0);
              buf.diag_grads[i][b] += p - static_cast<double>(label);
            }
          }
          if (rec.dysp >= 0)
            net_factor(Child::S0, static_cast<std::size_t>(rec.pneu), rec.dysp);
          if (rec.cough >= 0)
            net_factor(Child::S1, static_cast<std::size_t>(rec.pneu * 2 + rec.inf),
                       rec.cough);
          if (rec.nasal >= 0)
            net_factor(Child::S2, static_cast<std::size_t>(rec.inf), rec.nasal);
        }
      });

      // Combine block partials in fixed order, then update. Nets that no
      // record routed through this batch are left untouched.
      const double inv_batch = 1.0 / static_cast<double>(batch_n);
      for (std::size_t s = 0; s < live.net_count(); ++s) {
        long touched = 0;
        for (std::size_t bi = 0; bi < n_blocks; ++bi) touched += blocks[bi].touch[s];
        if (touched == 0) continue;
        accum[s].zero();
        for (std::size_t bi = 0; bi < n_blocks; ++bi)
          accum[s].add(blocks[bi].grads[s]);
        accum[s].scale(inv_batch);
        net_opts[s].step(live.net_at(s), accum[s]);
      }
      double prior_grad = 0.0;
      for (std::size_t bi = 0; bi < n_blocks; ++bi)
        prior_grad += blocks[bi].prior_grad;
      live.prior_logit() = prior_opt.step(live.prior_logit(), prior_grad * inv_batch);
      if (mode == Mode::Ablated) {
        for (int i = 0; i < 2; ++i)
          for (int b = 0; b < 2; ++b) {
            double g = 0.0;
            for (std::size_t bi = 0; bi < n_blocks; ++bi)
              g += blocks[bi].diag_grads[i][b];
            live.diag_logits()[i][b] =
                diag_opts[i][b].step(live.diag_logits()[i][b], g * inv_batch);
          }
      }
      for (std::size_t bi = 0; bi < n_blocks; ++bi) epoch_loss += blocks[bi].loss;
    }
    result.epoch_loss.push_back(epoch_loss);
  }
  return result;
}

}  // namespace hbn::classifier
