#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbn/datasim/dataset.hpp"
#include "hbn/eval/experiment.hpp"
#include "hbn/eval/metrics.hpp"
#include "oracles.hpp"

using namespace hbn;
using namespace hbn::eval;

TEST_CASE("perfect ranking scores one") {
  Vec scores{0.9, 0.8, 0.3, 0.1};
  std::vector<int> labels{1, 1, 0, 0};
  CHECK(average_precision(scores, labels) == doctest::Approx(1.0));
  CHECK(roc_auc(scores, labels) == doctest::Approx(1.0));
}

TEST_CASE("the worked three-item example") {
  Vec scores{0.9, 0.8, 0.7};
  std::vector<int> labels{1, 0, 1};
  CHECK(average_precision(scores, labels) ==
        doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("ties keep their input order") {
  Vec scores{0.5, 0.5, 0.5};
  std::vector<int> labels{0, 1, 0};
  // Stable order puts the positive at rank 2.
  CHECK(average_precision(scores, labels) == doctest::Approx(0.5));
}

TEST_CASE("no positives is an error") {
  Vec scores{0.2, 0.1};
  std::vector<int> labels{0, 0};
  CHECK_THROWS_AS(average_precision(scores, labels), std::invalid_argument);
}

TEST_CASE("average precision matches the quadratic oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 5 + rng.next_u64() % 60;
    Vec scores(n);
    std::vector<int> labels(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse scores make ties frequent.
      scores[i] = std::floor(rng.uniform01() * 8.0) / 8.0;
      labels[i] = rng.bernoulli(0.3) ? 1 : 0;
      any = any || labels[i] == 1;
    }
    if (!any) labels[0] = 1;
    double fast = average_precision(scores, labels);
    double slow = oracles::average_precision_quadratic(scores, labels);
    CHECK(std::abs(fast - slow) <= 1e-12);
  }
}

TEST_CASE("average precision ignores monotone score transforms") {
  Rng rng(6);
  Vec scores(200);
  std::vector<int> labels(200);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform01();
    labels[i] = rng.bernoulli(0.2) ? 1 : 0;
  }
  labels[0] = 1;
  double base = average_precision(scores, labels);
  auto transformed = [&](auto fn) {
    Vec t(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) t[i] = fn(scores[i]);
    return average_precision(t, labels);
  };
  CHECK(transformed([](double s) { return 3.0 * s + 7.0; }) == doctest::Approx(base));
  CHECK(transformed([](double s) { return std::exp(s); }) == doctest::Approx(base));
  CHECK(transformed([](double s) { return std::atan(s * 10.0); }) ==
        doctest::Approx(base));
}

TEST_CASE("random scores concentrate near the prevalence") {
  Rng rng(7);
  const std::size_t n = 10000;
  Vec scores(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform01();
    labels[i] = rng.bernoulli(0.1) ? 1 : 0;
  }
  double ap = average_precision(scores, labels);
  CHECK(std::abs(ap - 0.1) < 0.05);
}

TEST_CASE("model and pattern names round-trip") {
  for (ModelId m : kAllModels) CHECK(model_from_name(model_name(m)) == m);
  for (Pattern p : {Pattern::BST, Pattern::BS, Pattern::BT})
    CHECK(pattern_from_name(pattern_name(p)) == p);
  CHECK(legal_patterns(ModelId::Bn).size() == 1);
  CHECK(legal_patterns(ModelId::Discr).size() == 3);
}

TEST_CASE("a small experiment plan produces a consistent table") {
  auto gt = datasim::default_ground_truth();
  datasim::SyntheticEmbedderConfig emb_cfg;
  emb_cfg.dim = 8;
  datasim::SyntheticEmbedder emb(emb_cfg, 21);
  auto bundle = datasim::build_dataset(gt, emb, 360, 120, 21);

  // The extended view of the same training records.
  datasim::DatasetSplit train_ext = bundle.train;

  ExperimentPlan plan;
  plan.seeds = {0, 1};
  plan.classifier_cfg.epochs = 3;
  plan.classifier_cfg.hidden = 8;
  plan.ff_pneu.epochs = 3;
  plan.ff_pneu.hidden = 8;
  plan.ff_inf.epochs = 3;

  ResultTable table = run_experiment(plan, bundle.train, train_ext, bundle.test);

  // 2 baselines with one pattern + 5 text models with three patterns, twice
  // for the two diagnoses.
  CHECK(table.rows.size() == (2 * 1 + 5 * 3) * 2);

  const ResultRow* bn = table.find(ModelId::Bn, Pattern::BS, 0);
  REQUIRE(bn != nullptr);
  CHECK(bn->stddev == 0.0);  // deterministic across seeds, exactly
  CHECK(bn->per_seed[0] == bn->per_seed[1]);

  const ResultRow* gen_abl_bst = table.find(ModelId::GenAblated, Pattern::BST, 0);
  const ResultRow* gen_abl_bs = table.find(ModelId::GenAblated, Pattern::BS, 0);
  REQUIRE(gen_abl_bst != nullptr);
  REQUIRE(gen_abl_bs != nullptr);
  // With all symptoms observed the ablated text term cancels.
  CHECK(gen_abl_bst->mean == doctest::Approx(gen_abl_bs->mean).epsilon(1e-12));

  for (const auto& row : table.rows) {
    CHECK(row.failed_seeds.empty());
    for (double v : row.per_seed) {
      CHECK(!std::isnan(v));
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
  }

  // JSON round trip preserves the table.
  auto j = table_to_json(table);
  ResultTable back = table_from_json(j);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(back.rows[i].model == table.rows[i].model);
    CHECK(back.rows[i].mean == doctest::Approx(table.rows[i].mean).epsilon(1e-12));
    CHECK(back.rows[i].per_seed == table.rows[i].per_seed);
  }
  CHECK(render_table(back) == render_table(table));
}

TEST_CASE("a failing model surfaces its failed seeds") {
  auto gt = datasim::default_ground_truth();
  datasim::SyntheticEmbedderConfig emb_cfg;
  emb_cfg.dim = 4;
  datasim::SyntheticEmbedder emb(emb_cfg, 22);
  auto bundle = datasim::build_dataset(gt, emb, 120, 40, 22);

  ExperimentPlan plan;
  plan.models = {ModelId::Gen};
  plan.seeds = {0};
  plan.alpha = 0.0;  // rank-deficient covariances: the fit must fail

  ResultTable table = run_experiment(plan, bundle.train, {}, bundle.test);
  for (const auto& row : table.rows) {
    CHECK(row.failed_seeds == std::vector<std::uint64_t>{0});
    CHECK(std::isnan(row.mean));
  }
  CHECK(render_table(table).find("failed") != std::string::npos);
}
