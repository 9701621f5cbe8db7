#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "hbn/ff/encoding.hpp"
#include "hbn/ff/model.hpp"
#include "oracles.hpp"

using namespace hbn;
using namespace hbn::ff;
using datasim::PatientRecord;

namespace {

PatientRecord make_record(int season, int pneu, int inf, int dysp, int cough,
                          int nasal, Vec emb) {
  PatientRecord r;
  r.season = season;
  r.pneu = pneu;
  r.inf = inf;
  r.dysp = dysp;
  r.cough = cough;
  r.nasal = nasal;
  r.text_present = !emb.empty();
  r.embedding = std::move(emb);
  return r;
}

bool nets_equal(const neural::DenseNet& a, const neural::DenseNet& b) {
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    if (a.layers()[l].w.data != b.layers()[l].w.data) return false;
    if (a.layers()[l].b != b.layers()[l].b) return false;
  }
  return a.layers().size() == b.layers().size();
}

}  // namespace

TEST_CASE("warm season with unobserved symptoms hits the declared slots") {
  auto enc = encode(0, -1, -1, -1, false);
  Vec expected{1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1};
  CHECK(enc.base == expected);
  CHECK(enc.interactions.empty());
}

TEST_CASE("identical tabular values produce identical encodings") {
  auto a = encode(1, 1, 0, -1, true);
  auto b = encode(1, 1, 0, -1, true);
  CHECK(a.base == b.base);
  CHECK(a.interactions == b.interactions);
}

TEST_CASE("unknown levels are rejected") {
  CHECK_THROWS_AS(encode(2, 0, 0, 0, false), std::invalid_argument);
  CHECK_THROWS_AS(encode(0, 3, 0, 0, false), std::invalid_argument);
}

TEST_CASE("interaction layout has the documented block sizes") {
  auto enc = encode(0, 1, 0, -1, true);
  CHECK(enc.base.size() == kBaseDims);
  CHECK(enc.interactions.size() == kInteractionDims);
  // Widths 2,3,3,3: pairwise blocks 6+6+6+9+9+9, three-way 18+18+18+27,
  // four-way 54.
  std::size_t widths[4] = {2, 3, 3, 3};
  std::size_t pairs = 0, triples = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      pairs += widths[a] * widths[b];
      for (int c = b + 1; c < 4; ++c) triples += widths[a] * widths[b] * widths[c];
    }
  CHECK(pairs == 45);
  CHECK(triples == 81);
  CHECK(kInteractionDims == pairs + triples + 54);
}

TEST_CASE("interaction blocks each activate exactly one slot") {
  for (int season : {0, 1})
    for (int dysp : {-1, 0, 1}) {
      auto enc = encode(season, dysp, 1, 0, true);
      double base_sum = 0.0;
      for (double v : enc.base) base_sum += v;
      CHECK(base_sum == doctest::Approx(4.0));  // one slot per variable
      double inter_sum = 0.0;
      for (double v : enc.interactions) inter_sum += v;
      // 6 pairs + 4 triples + 1 quadruple, one active slot each.
      CHECK(inter_sum == doctest::Approx(11.0));
    }
}

TEST_CASE("interactions are a pure function of the base encoding") {
  auto enc = encode(1, 0, 1, 1, true);
  CHECK(interactions_from_base(enc.base) == enc.interactions);
}

TEST_CASE("training separates an easy dataset") {
  Rng rng(3);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 200; ++i) {
    int label = static_cast<int>(rng.next_u64() % 2);
    Vec e(6);
    for (double& v : e) v = rng.normal() * 0.3 + (label ? 1.0 : -1.0);
    records.push_back(make_record(static_cast<int>(rng.next_u64() % 2), label,
                                  0, static_cast<int>(rng.next_u64() % 2), 1, 0,
                                  std::move(e)));
  }
  FfConfig cfg = ff_default_config(0);
  cfg.hidden = 16;
  cfg.epochs = 60;
  cfg.dropout = 0.0;
  cfg.seed = 1;
  auto trained = train_ff(records, Vec(6, 0.0), 0, cfg);
  int correct = 0;
  for (const auto& r : records) {
    double p = trained.model.predict(r, EvidenceMode::Full);
    correct += (p > 0.5) == (r.pneu == 1);
  }
  CHECK(static_cast<double>(correct) / 200.0 > 0.95);
}

TEST_CASE("same seed twice yields identical parameters") {
  Rng rng(4);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 100; ++i) {
    Vec e(5);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        std::move(e)));
  }
  FfConfig cfg = ff_default_config(1);
  cfg.epochs = 5;
  cfg.seed = 7;
  auto a = train_ff(records, Vec(5, 0.0), 1, cfg);
  auto b = train_ff(records, Vec(5, 0.0), 1, cfg);
  CHECK(nets_equal(a.model.net(), b.model.net()));
  CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("no-text mode equals full mode when the text was already empty") {
  Rng init(5);
  Vec empty{0.1, 0.2};
  neural::DenseNet net({{kBaseDims + 2, 1, neural::Activation::Sigmoid, 0.0}}, init);
  FfModel model(std::move(net), false, empty);
  PatientRecord r = make_record(1, 0, 0, 1, 0, 1, {});
  r.text_present = false;
  CHECK(model.predict(r, EvidenceMode::Full) ==
        model.predict(r, EvidenceMode::NoText));
}

TEST_CASE("no-symptoms mode ignores the actual symptom values") {
  Rng init(6);
  Vec empty{0.0, 0.0, 0.0};
  neural::DenseNet net({{kBaseDims + 3, 1, neural::Activation::Sigmoid, 0.0}}, init);
  FfModel model(std::move(net), false, empty);
  Vec emb{0.4, -0.2, 0.9};
  PatientRecord a = make_record(0, 0, 0, 1, 1, 1, emb);
  PatientRecord b = make_record(0, 0, 0, 0, 0, 0, emb);
  CHECK(model.predict(a, EvidenceMode::NoSymptoms) ==
        model.predict(b, EvidenceMode::NoSymptoms));
  CHECK(model.predict(a, EvidenceMode::Full) != model.predict(b, EvidenceMode::Full));
}

TEST_CASE("a hand-built single layer matches the dot-product oracle") {
  Rng init(7);
  Vec empty{0.0, 0.0};
  neural::DenseNet net({{kBaseDims + 2, 1, neural::Activation::Sigmoid, 0.0}}, init);
  FfModel model(std::move(net), false, empty);
  Vec emb{0.3, -1.2};
  PatientRecord r = make_record(1, 0, 0, 0, 1, -1, emb);

  Vec input = model.build_input(r, EvidenceMode::Full);
  double z = model.net().layers()[0].b[0];
  for (std::size_t i = 0; i < input.size(); ++i)
    z += model.net().layers()[0].w(0, i) * input[i];
  double expected = 1.0 / (1.0 + std::exp(-z));
  CHECK(std::abs(model.predict(r, EvidenceMode::Full) - expected) <= 1e-10);
}

TEST_CASE("ff checkpoints round-trip through the directory format") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "hbn_ff_ckpt";
  fs::remove_all(dir);
  Rng init(8);
  Vec empty{0.5, 0.5};
  neural::DenseNet net({{kBaseDims + kInteractionDims + 2, 1,
                         neural::Activation::Sigmoid, 0.7}}, init);
  FfModel model(std::move(net), true, empty);
  model.save(dir, "inf", 11);
  auto loaded = FfModel::load(dir, "inf");
  CHECK(loaded.interactions());
  CHECK(loaded.empty_text() == empty);
  CHECK(nets_equal(loaded.net(), model.net()));
  fs::remove_all(dir);
}
