#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "hbn/classifier/bank.hpp"
#include "hbn/core/errors.hpp"
#include "hbn/neural/dense_net.hpp"
#include "oracles.hpp"

using namespace hbn;
using namespace hbn::classifier;
using datasim::PatientRecord;
namespace clinic = datasim::clinic;

namespace {

TrainConfig quick_config(int epochs = 10) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = 256;
  cfg.hidden = 8;
  cfg.diagnosis_dropout = 0.0;
  cfg.symptom_dropout = 0.0;
  cfg.seed = 0;
  return cfg;
}

ClassifierBank fresh_bank(Mode mode, std::size_t dim, const TrainConfig& cfg) {
  Rng init = Rng::substream(cfg.seed, "init");
  return ClassifierBank(mode, dim, Vec(dim, 0.0), cfg, init);
}

void set_constant_output(neural::DenseNet& net, double p) {
  // Zero weights and a bias at the logit of p turn the net into a constant.
  double logit = std::log(p / (1.0 - p));
  for (auto& layer : net.layers()) {
    layer.w.fill(0.0);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
  net.layers().back().b[0] = logit;
}

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
  if (a.layers().size() != b.layers().size()) return false;
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    if (std::memcmp(a.layers()[l].w.data.data(), b.layers()[l].w.data.data(),
                    a.layers()[l].w.data.size() * sizeof(double)) != 0)
      return false;
    if (std::memcmp(a.layers()[l].b.data(), b.layers()[l].b.data(),
                    a.layers()[l].b.size() * sizeof(double)) != 0)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("uninformative bank answers one half everywhere") {
  auto cfg = quick_config();
  auto bank = fresh_bank(Mode::Full, 3, cfg);
  for (std::size_t s = 0; s < bank.net_count(); ++s)
    set_constant_output(bank.net_at(s), 0.5);
  bank.prior_logit() = 0.0;

  Vec x{0.2, -0.4, 1.0};
  for (const auto* q : {clinic::kPneu, clinic::kInf}) {
    discrete::Assignment ev{{clinic::kSeason, 1},
                            {clinic::kDysp, 1},
                            {clinic::kCough, 0},
                            {clinic::kNasal, 1}};
    auto post = discr_posterior(bank, ev, &x, q);
    CHECK(post[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("symptom nets constant across parents cancel out") {
  auto cfg = quick_config();
  auto bank = fresh_bank(Mode::Full, 2, cfg);
  set_constant_output(bank.net(Child::D0, 0), 0.23);
  set_constant_output(bank.net(Child::D0, 1), 0.71);
  set_constant_output(bank.net(Child::D1, 0), 0.4);
  set_constant_output(bank.net(Child::D1, 1), 0.6);
  for (std::size_t c = 0; c < 2; ++c) set_constant_output(bank.net(Child::S0, c), 0.3);
  for (std::size_t c = 0; c < 4; ++c) set_constant_output(bank.net(Child::S1, c), 0.8);
  for (std::size_t c = 0; c < 2; ++c) set_constant_output(bank.net(Child::S2, c), 0.55);

  Vec x{0.0, 0.0};
  discrete::Assignment ev{{clinic::kSeason, 0},
                          {clinic::kDysp, 1},
                          {clinic::kCough, 1},
                          {clinic::kNasal, 0}};
  auto post = discr_posterior(bank, ev, &x, clinic::kPneu);
  CHECK(post[1] == doctest::Approx(0.23).epsilon(1e-9));
  ev.set(clinic::kSeason, 1);
  post = discr_posterior(bank, ev, &x, clinic::kPneu);
  CHECK(post[1] == doctest::Approx(0.71).epsilon(1e-9));
}

TEST_CASE("posterior matches a term-by-term enumeration oracle") {
  auto cfg = quick_config();
  cfg.seed = 5;
  auto bank = fresh_bank(Mode::Full, 3, cfg);
  Vec x{0.7, -0.3, 0.1};

  discrete::Assignment ev{{clinic::kSeason, 1},
                          {clinic::kDysp, 0},
                          {clinic::kCough, 1},
                          {clinic::kNasal, 1}};
  auto out = [&](Child c, std::size_t cfg_idx) {
    return bank.classifier_output(c, cfg_idx, x);
  };
  double num = 0.0, den = 0.0;
  for (int d0 = 0; d0 < 2; ++d0)
    for (int d1 = 0; d1 < 2; ++d1) {
      double p0 = out(Child::D0, 1);
      double p1 = out(Child::D1, 1);
      double term = (d0 ? p0 : 1.0 - p0) * (d1 ? p1 : 1.0 - p1);
      term *= 1.0 - out(Child::S0, static_cast<std::size_t>(d0));  // dysp = 0
      term *= out(Child::S1, static_cast<std::size_t>(d0 * 2 + d1));  // cough = 1
      term *= out(Child::S2, static_cast<std::size_t>(d1));  // nasal = 1
      den += term;
      if (d0 == 1) num += term;
    }
  auto post = discr_posterior(bank, ev, &x, clinic::kPneu);
  CHECK(std::abs(post[1] - num / den) <= 1e-9);
}

TEST_CASE("no text conditions on the empty-text embedding, bit for bit") {
  auto cfg = quick_config();
  cfg.seed = 6;
  Rng init = Rng::substream(cfg.seed, "init");
  Vec empty{0.5, -0.5, 0.25};
  ClassifierBank bank(Mode::Full, 3, empty, cfg, init);

  discrete::Assignment ev{{clinic::kSeason, 0},
                          {clinic::kDysp, 1},
                          {clinic::kCough, 1},
                          {clinic::kNasal, 0}};
  auto without = discr_posterior(bank, ev, nullptr, clinic::kInf);
  auto with_empty = discr_posterior(bank, ev, &empty, clinic::kInf);
  CHECK(std::memcmp(without.data(), with_empty.data(), 2 * sizeof(double)) == 0);
}

TEST_CASE("text-only queries return the diagnosis net output") {
  auto cfg = quick_config();
  cfg.seed = 7;
  auto bank = fresh_bank(Mode::Full, 4, cfg);
  Vec x{0.1, 0.2, 0.3, 0.4};
  discrete::Assignment ev{{clinic::kSeason, 1}};
  auto post = discr_posterior(bank, ev, &x, clinic::kPneu);
  CHECK(post[1] ==
        doctest::Approx(bank.classifier_output(Child::D0, 1, x)).epsilon(1e-9));
}

TEST_CASE("flipping an observed parent switches nets and nothing else") {
  auto cfg = quick_config();
  cfg.seed = 8;
  auto bank = fresh_bank(Mode::Full, 2, cfg);
  Vec x{1.0, -1.0};

  PosteriorDetail warm, cold;
  discrete::Assignment ev{{clinic::kSeason, 0},
                          {clinic::kDysp, 1},
                          {clinic::kCough, 0},
                          {clinic::kNasal, 1}};
  discr_posterior(bank, ev, &x, clinic::kPneu, &warm);
  ev.set(clinic::kSeason, 1);
  discr_posterior(bank, ev, &x, clinic::kPneu, &cold);

  auto values_of = [](const PosteriorDetail& d, const std::string& prefix) {
    Vec vals;
    for (const auto& f : d.factors)
      if (f.label.rfind(prefix, 0) == 0) vals.push_back(f.value);
    return vals;
  };
  CHECK(values_of(warm, "P(pneu=1|season=0")[0] ==
        bank.classifier_output(Child::D0, 0, x));
  CHECK(values_of(cold, "P(pneu=1|season=1")[0] ==
        bank.classifier_output(Child::D0, 1, x));
  CHECK(values_of(warm, "P(pneu=1|season=0")[0] !=
        values_of(cold, "P(pneu=1|season=1")[0]);
  CHECK(values_of(warm, "P(dysp") == values_of(cold, "P(dysp"));
  CHECK(values_of(warm, "P(cough") == values_of(cold, "P(cough"));
  CHECK(values_of(warm, "P(nasal") == values_of(cold, "P(nasal"));
}

TEST_CASE("saturating data drives the routed net above 0.99") {
  Rng rng(9);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 128; ++i) {
    Vec e(4);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(0, 1, static_cast<int>(rng.next_u64() % 2), 1,
                                  1, 0, std::move(e)));
  }
  auto cfg = quick_config(300);
  cfg.learning_rate = 0.05;
  auto trained = train_bank(records, Vec(4, 0.0), cfg, Mode::Full);
  for (const auto& r : records) {
    double out = trained.bank.classifier_output(Child::D0, 0, r.embedding);
    CHECK(out > 0.99);
  }
}

TEST_CASE("symptom-masked batches leave symptom nets bit-identical") {
  Rng rng(10);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 64; ++i) {
    Vec e(4);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(static_cast<int>(rng.next_u64() % 2),
                                  static_cast<int>(rng.next_u64() % 2),
                                  static_cast<int>(rng.next_u64() % 2), -1, -1,
                                  -1, std::move(e)));
  }
  auto cfg = quick_config(5);
  auto trained = train_bank(records, Vec(4, 0.0), cfg, Mode::Full);
  auto reference = fresh_bank(Mode::Full, 4, cfg);

  for (Child c : {Child::S0, Child::S1, Child::S2})
    for (std::size_t k = 0; k < config_count(c); ++k)
      CHECK(nets_equal(trained.bank.net(c, k), reference.net(c, k)));
  CHECK_FALSE(nets_equal(trained.bank.net(Child::D0, 0), reference.net(Child::D0, 0)));
}

TEST_CASE("training loss decreases over the first five epochs") {
  Rng rng(11);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 256; ++i) {
    int pneu = static_cast<int>(rng.next_u64() % 2);
    int inf = static_cast<int>(rng.next_u64() % 2);
    Vec e(6);
    for (std::size_t d = 0; d < e.size(); ++d)
      e[d] = rng.normal() * 0.5 + (pneu ? 1.0 : -1.0) * (d < 3 ? 1.0 : 0.0) +
             (inf ? 1.0 : -1.0) * (d >= 3 ? 1.0 : 0.0);
    records.push_back(make_record(static_cast<int>(rng.next_u64() % 2), pneu,
                                  inf, static_cast<int>(rng.next_u64() % 2),
                                  static_cast<int>(rng.next_u64() % 2),
                                  static_cast<int>(rng.next_u64() % 2),
                                  std::move(e)));
  }
  auto cfg = quick_config(6);
  cfg.seed = 0;
  auto trained = train_bank(records, Vec(6, 0.0), cfg, Mode::Full);
  for (int e = 0; e + 1 < 5; ++e)
    CHECK(trained.epoch_loss[e + 1] < trained.epoch_loss[e]);
}

TEST_CASE("record loss decomposes into its factor losses") {
  Rng rng(12);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 10; ++i) {
    Vec e(3);
    for (double& v : e) v = rng.normal();
    int masked = i % 2;
    records.push_back(make_record(
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), masked ? -1 : 1, masked ? -1 : 0,
        masked ? -1 : 1, std::move(e)));
  }
  auto cfg = quick_config(1);
  cfg.batch_size = 64;  // one batch: the whole epoch scores initial parameters
  cfg.seed = 13;
  auto trained = train_bank(records, Vec(3, 0.0), cfg, Mode::Full);

  auto bank = fresh_bank(Mode::Full, 3, cfg);
  double expected = 0.0;
  for (const auto& r : records) {
    const Vec& x = r.embedding;
    expected += neural::bce_loss(bank.prior_b(), r.season, 1.0);
    expected += neural::bce_loss(
        bank.classifier_output(Child::D0, static_cast<std::size_t>(r.season), x),
        r.pneu, 1.0);
    expected += neural::bce_loss(
        bank.classifier_output(Child::D1, static_cast<std::size_t>(r.season), x),
        r.inf, 1.0);
    if (r.dysp >= 0)
      expected += neural::bce_loss(
          bank.classifier_output(Child::S0, static_cast<std::size_t>(r.pneu), x),
          r.dysp, 1.0);
    if (r.cough >= 0)
      expected += neural::bce_loss(
          bank.classifier_output(Child::S1,
                                 static_cast<std::size_t>(r.pneu * 2 + r.inf), x),
          r.cough, 1.0);
    if (r.nasal >= 0)
      expected += neural::bce_loss(
          bank.classifier_output(Child::S2, static_cast<std::size_t>(r.inf), x),
          r.nasal, 1.0);
  }
  CHECK(trained.epoch_loss[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("season prior converges to the closed-form frequency") {
  Rng rng(14);
  std::vector<PatientRecord> records;
  int cold = 0;
  for (int i = 0; i < 64; ++i) {
    int season = i % 4 == 0 ? 1 : 0;
    cold += season;
    Vec e(2);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(season, 0, 0, 0, 0, 0, std::move(e)));
  }
  auto cfg = quick_config(4000);
  cfg.batch_size = 64;  // deterministic full-batch gradient
  auto trained = train_bank(records, Vec(2, 0.0), cfg, Mode::Full);
  double freq = static_cast<double>(cold) / 64.0;
  CHECK(std::abs(trained.bank.prior_b() - freq) < 1e-6);
}

TEST_CASE("training is deterministic per seed") {
  Rng rng(15);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 96; ++i) {
    Vec e(4);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        std::move(e)));
  }
  auto cfg = quick_config(4);
  cfg.diagnosis_dropout = 0.5;  // exercises the seeded dropout path
  cfg.seed = 99;
  auto a = train_bank(records, Vec(4, 0.0), cfg, Mode::Full);
  auto b = train_bank(records, Vec(4, 0.0), cfg, Mode::Full);
  for (std::size_t s = 0; s < a.bank.net_count(); ++s)
    CHECK(nets_equal(a.bank.net_at(s), b.bank.net_at(s)));
  CHECK(a.bank.prior_logit() == b.bank.prior_logit());
  CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("observed symptom with a masked diagnosis is rejected") {
  PatientRecord r = make_record(0, 0, 0, 1, 1, 1, Vec{0.0, 0.0});
  r.pneu = -1;
  CHECK_THROWS_WITH_AS(train_bank({r}, Vec(2, 0.0), quick_config(1), Mode::Full),
                       doctest::Contains("record 0"), std::invalid_argument);
}

TEST_CASE("ablated bank: no symptoms means the text cannot matter") {
  auto cfg = quick_config();
  cfg.seed = 16;
  auto bank = fresh_bank(Mode::Ablated, 3, cfg);
  bank.diag_logits()[0][0] = 0.4;
  bank.diag_logits()[0][1] = -0.8;
  bank.diag_logits()[1][0] = 0.1;
  bank.diag_logits()[1][1] = 0.9;

  Vec x{2.0, -1.0, 0.5};
  discrete::Assignment ev{{clinic::kSeason, 1}};
  auto with_text = discr_posterior(bank, ev, &x, clinic::kPneu);
  CHECK(std::abs(with_text[1] - bank.diag_row(0, 1)) <= 1e-9);

  // With symptoms observed the text flows through the symptom nets.
  ev.set(clinic::kDysp, 1);
  auto a = discr_posterior(bank, ev, &x, clinic::kPneu);
  Vec y{-2.0, 1.0, -0.5};
  auto b = discr_posterior(bank, ev, &y, clinic::kPneu);
  CHECK(std::abs(a[1] - b[1]) > 1e-12);
}

TEST_CASE("ablated bank has eight nets and rejects diagnosis net access") {
  auto cfg = quick_config();
  auto bank = fresh_bank(Mode::Ablated, 2, cfg);
  CHECK(bank.net_count() == 8);
  CHECK_THROWS_AS(bank.net(Child::D0, 0), std::invalid_argument);
  auto full = fresh_bank(Mode::Full, 2, cfg);
  CHECK(full.net_count() == 12);
}

TEST_CASE("zero denominator raises the explicit error") {
  auto cfg = quick_config();
  auto bank = fresh_bank(Mode::Full, 2, cfg);
  // Both dysp nets report certainty for dysp = 1; the evidence says 0.
  for (std::size_t c = 0; c < 2; ++c) {
    auto& net = bank.net(Child::S0, c);
    for (auto& layer : net.layers()) layer.w.fill(0.0);
    net.layers().back().b[0] = 1000.0;  // saturates to exactly 1.0
  }
  Vec x{0.0, 0.0};
  discrete::Assignment ev{{clinic::kSeason, 0}, {clinic::kDysp, 0}};
  CHECK_THROWS_AS(discr_posterior(bank, ev, &x, clinic::kPneu),
                  ZeroEvidenceError);
}

TEST_CASE("classifier bank checkpoints round-trip") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "hbn_cls_ckpt";
  fs::remove_all(dir);
  Rng rng(17);
  std::vector<PatientRecord> records;
  for (int i = 0; i < 64; ++i) {
    Vec e(3);
    for (double& v : e) v = rng.normal();
    records.push_back(make_record(
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        static_cast<int>(rng.next_u64() % 2), static_cast<int>(rng.next_u64() % 2),
        std::move(e)));
  }
  auto cfg = quick_config(3);
  auto trained = train_bank(records, Vec(3, 0.125), cfg, Mode::Full);
  trained.bank.save(dir, cfg.seed, "cafebabe");
  auto loaded = ClassifierBank::load(dir);
  CHECK(loaded.mode() == Mode::Full);
  CHECK(loaded.dim() == 3);
  CHECK(loaded.empty_text() == trained.bank.empty_text());
  for (std::size_t s = 0; s < trained.bank.net_count(); ++s)
    CHECK(nets_equal(loaded.net_at(s), trained.bank.net_at(s)));
  CHECK(loaded.prior_b() == doctest::Approx(trained.bank.prior_b()).epsilon(1e-15));
  fs::remove_all(dir);
}
