#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "hbn/classifier/bank.hpp"
#include "hbn/datasim/record.hpp"
#include "hbn/ff/model.hpp"
#include "hbn/gaussian/bank.hpp"

namespace hbn::eval {

enum class ModelId { Bn, BnPlus, Ff, Gen, Discr, GenAblated, DiscrAblated };
enum class Pattern { BST, BS, BT };

inline constexpr ModelId kAllModels[] = {
    ModelId::Bn,  ModelId::BnPlus,      ModelId::Ff,          ModelId::Gen,
    ModelId::Discr, ModelId::GenAblated, ModelId::DiscrAblated};

std::string model_name(ModelId m);
ModelId model_from_name(const std::string& name);
std::string pattern_name(Pattern p);
Pattern pattern_from_name(const std::string& name);

// The plain networks take only background and symptoms as evidence; every
// text model supports all three patterns.
std::vector<Pattern> legal_patterns(ModelId m);

struct ExperimentPlan {
  std::vector<ModelId> models{std::begin(kAllModels), std::end(kAllModels)};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  classifier::TrainConfig classifier_cfg{};
  ff::FfConfig ff_pneu = ff::ff_default_config(0);
  ff::FfConfig ff_inf = ff::ff_default_config(1);
  double alpha = 0.85;
  bool gaussian_diagonal = false;
};

struct ResultRow {
  ModelId model{};
  Pattern pattern{};
  int diagnosis = 0;  // 0 = pneu, 1 = inf
  std::vector<double> per_seed;  // NaN marks a failed seed
  std::vector<std::uint64_t> failed_seeds;
  double mean = 0.0;
  double stddev = 0.0;  // population deviation over the successful seeds
};

struct ResultTable {
  std::vector<std::uint64_t> seeds;
  std::vector<ResultRow> rows;

  const ResultRow* find(ModelId m, Pattern p, int diagnosis) const;
};

// Trains every planned model once per seed, scores the full test split under
// each legal evidence pattern and aggregates average precision per diagnosis.
// A seed whose training fails numerically is recorded and skipped. Test-set
// scoring runs in parallel; results do not depend on the thread count.
ResultTable run_experiment(const ExperimentPlan& plan,
                           const datasim::DatasetSplit& train,
                           const datasim::DatasetSplit& train_extended,
                           const datasim::DatasetSplit& test);

std::string render_table(const ResultTable& table);
nlohmann::json table_to_json(const ResultTable& table);
ResultTable table_from_json(const nlohmann::json& j);

}  // namespace hbn::eval
