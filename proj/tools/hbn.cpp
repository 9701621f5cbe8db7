// Command-line front end: simulate data, train models, query posteriors,
// run evaluation plans and render result tables. Every subcommand is a pure
// function of its inputs and the seed; rerunning a command reproduces its
// output files byte for byte.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "hbn/classifier/bank.hpp"
#include "hbn/core/errors.hpp"
#include "hbn/datasim/dataset.hpp"
#include "hbn/discrete/network.hpp"
#include "hbn/eval/experiment.hpp"
#include "hbn/ff/model.hpp"
#include "hbn/gaussian/bank.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hbn;
namespace clinic = datasim::clinic;

namespace {

std::string hex_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  return json::parse(in);
}

template <typename T>
void config_override(const CLI::App* sub, const std::string& flag,
                     const json& cfg, const char* key, T& value) {
  if (sub->count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

json read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in)
    throw std::invalid_argument("missing manifest " + (dir / "manifest.json").string());
  return json::parse(in);
}

void write_manifest(const fs::path& dir, const json& manifest) {
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

discrete::DiscreteBn load_network(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read network file " + path.string());
  return discrete::DiscreteBn::from_json(json::parse(in));
}

std::size_t count_positive(const std::vector<datasim::PatientRecord>& records,
                           int diagnosis) {
  std::size_t n = 0;
  for (const auto& r : records)
    n += (diagnosis == 0 ? r.pneu : r.inf) == 1 ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::string config_path;
  std::string out_dir;
  std::string ground_truth_path;
  std::uint64_t seed = 0;
  std::size_t n_train = 4000;
  std::size_t n_test = 1000;
  datasim::SyntheticEmbedderConfig embedder;
};

void run_simulate(const CLI::App* sub, SimulateOpts opts) {
  json cfg = load_config_file(opts.config_path);
  config_override(sub, "--seed", cfg, "seed", opts.seed);
  config_override(sub, "--n-train", cfg, "n_train", opts.n_train);
  config_override(sub, "--n-test", cfg, "n_test", opts.n_test);
  config_override(sub, "--dim", cfg, "dim", opts.embedder.dim);
  config_override(sub, "--noise", cfg, "noise_sigma", opts.embedder.noise_sigma);
  config_override(sub, "--distractor", cfg, "distractor_scale",
                  opts.embedder.distractor_scale);
  config_override(sub, "--prototype-scale", cfg, "prototype_scale",
                  opts.embedder.prototype_scale);
  config_override(sub, "--ground-truth", cfg, "ground_truth",
                  opts.ground_truth_path);

  discrete::DiscreteBn gt = opts.ground_truth_path.empty()
                                ? datasim::default_ground_truth()
                                : load_network(opts.ground_truth_path);

  datasim::SyntheticEmbedder embedder(opts.embedder, opts.seed);
  datasim::DatasetBundle bundle =
      datasim::build_dataset(gt, embedder, opts.n_train, opts.n_test, opts.seed);

  fs::create_directories(opts.out_dir);
  fs::path dir(opts.out_dir);
  datasim::save_records(bundle.train.records, false, dir / "train.jsonl");
  datasim::save_records(bundle.train.records, true, dir / "train_full.jsonl");
  datasim::save_records(bundle.test.records, false, dir / "test.jsonl");
  datasim::save_records(bundle.test.records, true, dir / "test_full.jsonl");
  datasim::save_embeddings(bundle.train, dir / "train_embeddings.jsonl");
  datasim::save_embeddings(bundle.test, dir / "test_embeddings.jsonl");
  write_text(dir / "ground_truth.json", gt.to_json().dump(2) + "\n");

  std::size_t masked_symptoms = 0, masked_text = 0, full = 0;
  for (const auto& r : bundle.train.records) {
    if (r.dysp < 0)
      ++masked_symptoms;
    else if (!r.text_present)
      ++masked_text;
    else
      ++full;
  }
  std::printf("train: %zu records, pneu+ %zu, inf+ %zu\n",
              bundle.train.records.size(), count_positive(bundle.train.records, 0),
              count_positive(bundle.train.records, 1));
  std::printf("  thirds: %zu symptoms masked, %zu text masked, %zu fully observed\n",
              masked_symptoms, masked_text, full);
  std::printf("test: %zu records, pneu+ %zu, inf+ %zu\n",
              bundle.test.records.size(), count_positive(bundle.test.records, 0),
              count_positive(bundle.test.records, 1));
  std::printf("wrote dataset files to %s\n", opts.out_dir.c_str());
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string model;
  bool ablate = false;
  std::string data_path;
  std::string embeddings_path;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  double alpha = 0.85;
  bool diagonal = false;
  classifier::TrainConfig cls;
  ff::FfConfig ff_pneu = ff::ff_default_config(0);
  ff::FfConfig ff_inf = ff::ff_default_config(1);
};

datasim::DatasetSplit load_split_for_training(const TrainOpts& opts) {
  if (opts.embeddings_path.empty())
    throw std::invalid_argument("--embeddings is required for model " + opts.model);
  return datasim::load_external(opts.data_path, opts.embeddings_path);
}

void run_train(const CLI::App* sub, TrainOpts opts) {
  json cfg = load_config_file(opts.config_path);
  config_override(sub, "--seed", cfg, "seed", opts.seed);
  config_override(sub, "--alpha", cfg, "alpha", opts.alpha);
  config_override(sub, "--epochs", cfg, "epochs", opts.cls.epochs);
  config_override(sub, "--batch-size", cfg, "batch_size", opts.cls.batch_size);
  config_override(sub, "--lr", cfg, "learning_rate", opts.cls.learning_rate);
  config_override(sub, "--weight-decay", cfg, "weight_decay", opts.cls.weight_decay);
  config_override(sub, "--prior-lr", cfg, "prior_learning_rate",
                  opts.cls.prior_learning_rate);
  config_override(sub, "--hidden", cfg, "hidden", opts.cls.hidden);
  config_override(sub, "--diag-cov", cfg, "diagonal_covariance", opts.diagonal);
  opts.cls.seed = opts.seed;
  for (ff::FfConfig* f : {&opts.ff_pneu, &opts.ff_inf}) {
    f->epochs = opts.cls.epochs;
    f->batch_size = opts.cls.batch_size;
    f->learning_rate = opts.cls.learning_rate;
    f->weight_decay = opts.cls.weight_decay;
    f->seed = opts.seed;
  }

  json resolved = {{"model", opts.model},     {"ablate", opts.ablate},
                   {"seed", opts.seed},       {"alpha", opts.alpha},
                   {"epochs", opts.cls.epochs}, {"batch_size", opts.cls.batch_size},
                   {"learning_rate", opts.cls.learning_rate},
                   {"weight_decay", opts.cls.weight_decay},
                   {"prior_learning_rate", opts.cls.prior_learning_rate},
                   {"hidden", opts.cls.hidden}, {"diagonal_covariance", opts.diagonal}};
  std::string config_hash = hex_hash(resolved.dump());

  fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  if (opts.model == "bn" || opts.model == "bnpp") {
    auto records = datasim::load_records(opts.data_path);
    bool extended = opts.model == "bnpp";
    if (extended)
      for (const auto& r : records)
        if (r.fever < 0 || r.pain < 0)
          throw std::invalid_argument(
              "bnpp needs the extended dataset variant (fever/pain columns)");
    std::vector<discrete::Assignment> asg;
    asg.reserve(records.size());
    for (const auto& r : records)
      asg.push_back(datasim::record_to_assignment(r, extended));
    auto bn = discrete::DiscreteBn::fit(extended
                                            ? datasim::extended_model_structure()
                                            : datasim::observed_model_structure(),
                                        asg);
    write_text(dir / "network.json", bn.to_json().dump(2) + "\n");
    write_manifest(dir, {{"model", opts.model},
                         {"seed", opts.seed},
                         {"config_hash", config_hash}});
  } else if (opts.model == "gen") {
    auto split = load_split_for_training(opts);
    std::vector<discrete::Assignment> asg;
    for (const auto& r : split.records)
      asg.push_back(datasim::record_to_assignment(r, false));
    auto bn = discrete::DiscreteBn::fit(datasim::observed_model_structure(), asg);
    auto bank = gaussian::GaussianBank::fit(
        split.records, opts.alpha,
        opts.ablate ? gaussian::BankMode::Ablated : gaussian::BankMode::Full,
        opts.diagonal);
    write_text(dir / "network.json", bn.to_json().dump(2) + "\n");
    bank.save(dir / "bank.bin");
    write_manifest(dir, {{"model", "gen"},
                         {"ablated", opts.ablate},
                         {"alpha", opts.alpha},
                         {"seed", opts.seed},
                         {"config_hash", config_hash}});
  } else if (opts.model == "discr") {
    auto split = load_split_for_training(opts);
    auto trained = classifier::train_bank(
        split.records, split.empty_text, opts.cls,
        opts.ablate ? classifier::Mode::Ablated : classifier::Mode::Full);
    trained.bank.save(dir, opts.seed, config_hash);
    std::printf("final epoch loss: %.6f\n", trained.epoch_loss.back());
  } else if (opts.model == "ff") {
    auto split = load_split_for_training(opts);
    auto pneu = ff::train_ff(split.records, split.empty_text, 0, opts.ff_pneu);
    auto inf = ff::train_ff(split.records, split.empty_text, 1, opts.ff_inf);
    pneu.model.save(dir, "pneu", opts.seed);
    inf.model.save(dir, "inf", opts.seed);
    write_manifest(dir, {{"model", "ff"},
                         {"seed", opts.seed},
                         {"config_hash", config_hash}});
    std::printf("final epoch loss: pneu %.6f, inf %.6f\n",
                pneu.epoch_loss.back(), inf.epoch_loss.back());
  } else {
    throw std::invalid_argument("unknown model " + opts.model);
  }
  std::printf("checkpoint written to %s\n", opts.out_dir.c_str());
}

// ---------------------------------------------------------------------------
// infer

struct InferOpts {
  std::string checkpoint;
  std::string record_inline;
  std::string record_file;
  std::string embeddings_path;
  std::string evidence = "bst";
};

datasim::PatientRecord parse_infer_record(const InferOpts& opts) {
  std::string text = opts.record_inline;
  if (text.empty()) {
    if (opts.record_file.empty())
      throw std::invalid_argument("provide --record or --record-file");
    std::ifstream in(opts.record_file);
    if (!in) throw std::invalid_argument("cannot read record file " + opts.record_file);
    std::getline(in, text);
  }
  auto rec = datasim::record_from_json(nlohmann::ordered_json::parse(text));
  if (rec.text_present && rec.embedding.empty() && !opts.embeddings_path.empty()) {
    std::ifstream in(opts.embeddings_path);
    if (!in)
      throw std::invalid_argument("cannot read embeddings file " +
                                  opts.embeddings_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::ordered_json::parse(line);
      if (j.at("id").is_number() && j.at("id").get<std::int64_t>() == rec.id) {
        rec.embedding = j.at("vec").get<Vec>();
        break;
      }
    }
  }
  return rec;
}

void run_infer(const InferOpts& opts) {
  json manifest = read_manifest(opts.checkpoint);
  std::string model = manifest.at("model").get<std::string>();
  eval::Pattern pattern = eval::pattern_from_name(opts.evidence);
  datasim::PatientRecord rec = parse_infer_record(opts);
  fs::path dir(opts.checkpoint);

  const bool symptoms = pattern != eval::Pattern::BT;
  const Vec* emb = pattern != eval::Pattern::BS && rec.text_present &&
                           !rec.embedding.empty()
                       ? &rec.embedding
                       : nullptr;
  if (pattern != eval::Pattern::BS && rec.text_present && rec.embedding.empty())
    throw std::invalid_argument(
        "record claims text but carries no \"vec\" embedding");

  auto pattern_label = [&] {
    switch (pattern) {
      case eval::Pattern::BST: return "B+S+T";
      case eval::Pattern::BS: return "B+S";
      case eval::Pattern::BT: return "B+T";
    }
    return "";
  }();

  if (model == "bn" || model == "bnpp") {
    if (pattern != eval::Pattern::BS)
      throw std::invalid_argument(
          "model " + model +
          " takes only background and symptoms as evidence (use --evidence bs)");
    auto bn = load_network(dir / "network.json");
    auto ev = datasim::evidence_for_pattern(rec, true, model == "bnpp");
    std::printf("P(pneu=1 | %s) = %.6f\n", pattern_label,
                bn.posterior(clinic::kPneu, ev)[1]);
    std::printf("P(inf=1 | %s) = %.6f\n", pattern_label,
                bn.posterior(clinic::kInf, ev)[1]);
  } else if (model == "gen") {
    auto bn = load_network(dir / "network.json");
    auto bank = gaussian::GaussianBank::load(dir / "bank.bin");
    auto ev = datasim::evidence_for_pattern(rec, symptoms, false);
    std::printf("P(pneu=1 | %s) = %.6f\n", pattern_label,
                gaussian::gen_posterior(bank, bn, ev, emb, clinic::kPneu)[1]);
    std::printf("P(inf=1 | %s) = %.6f\n", pattern_label,
                gaussian::gen_posterior(bank, bn, ev, emb, clinic::kInf)[1]);
  } else if (model == "discr") {
    auto bank = classifier::ClassifierBank::load(dir);
    auto ev = datasim::evidence_for_pattern(rec, symptoms, false);
    classifier::PosteriorDetail detail;
    double p_pneu = classifier::discr_posterior(bank, ev, emb, clinic::kPneu, &detail)[1];
    double p_inf = classifier::discr_posterior(bank, ev, emb, clinic::kInf)[1];
    std::printf("P(pneu=1 | %s) = %.6f\n", pattern_label, p_pneu);
    std::printf("P(inf=1 | %s) = %.6f\n", pattern_label, p_inf);
    std::printf("classifier outputs:\n");
    for (const auto& f : detail.factors)
      std::printf("  %s = %.6f\n", f.label.c_str(), f.value);
  } else if (model == "ff") {
    auto pneu = ff::FfModel::load(dir, "pneu");
    auto inf = ff::FfModel::load(dir, "inf");
    ff::EvidenceMode mode = pattern == eval::Pattern::BST ? ff::EvidenceMode::Full
                            : pattern == eval::Pattern::BS
                                ? ff::EvidenceMode::NoText
                                : ff::EvidenceMode::NoSymptoms;
    std::printf("P(pneu=1 | %s) = %.6f\n", pattern_label, pneu.predict(rec, mode));
    std::printf("P(inf=1 | %s) = %.6f\n", pattern_label, inf.predict(rec, mode));
  } else {
    throw std::invalid_argument("unknown model " + model + " in manifest");
  }
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  std::string data_dir;
  std::string out_dir;
  std::string models = "bn,bnpp,ff,gen,discr,gen-,discr-";
  std::string config_path;
  int n_seeds = 5;
  double alpha = 0.85;
  bool diagonal = false;
  int epochs = 200;
  int batch_size = 256;
};

void run_evaluate(const CLI::App* sub, EvaluateOpts opts) {
  json cfg = load_config_file(opts.config_path);
  config_override(sub, "--seeds", cfg, "seeds", opts.n_seeds);
  config_override(sub, "--alpha", cfg, "alpha", opts.alpha);
  config_override(sub, "--epochs", cfg, "epochs", opts.epochs);
  config_override(sub, "--batch-size", cfg, "batch_size", opts.batch_size);
  config_override(sub, "--diag-cov", cfg, "diagonal_covariance", opts.diagonal);
  config_override(sub, "--models", cfg, "models", opts.models);

  fs::path dir(opts.data_dir);
  auto train = datasim::load_external(dir / "train.jsonl",
                                      dir / "train_embeddings.jsonl");
  datasim::DatasetSplit train_ext;
  if (fs::exists(dir / "train_full.jsonl"))
    train_ext = datasim::load_external(dir / "train_full.jsonl",
                                       dir / "train_embeddings.jsonl");
  fs::path test_records = fs::exists(dir / "test_full.jsonl")
                              ? dir / "test_full.jsonl"
                              : dir / "test.jsonl";
  auto test = datasim::load_external(test_records, dir / "test_embeddings.jsonl");

  eval::ExperimentPlan plan;
  plan.models.clear();
  std::stringstream ss(opts.models);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) plan.models.push_back(eval::model_from_name(token));
  plan.seeds.clear();
  for (int s = 0; s < opts.n_seeds; ++s)
    plan.seeds.push_back(static_cast<std::uint64_t>(s));
  plan.alpha = opts.alpha;
  plan.gaussian_diagonal = opts.diagonal;
  plan.classifier_cfg.epochs = opts.epochs;
  plan.classifier_cfg.batch_size = opts.batch_size;
  plan.ff_pneu.epochs = opts.epochs;
  plan.ff_pneu.batch_size = opts.batch_size;
  plan.ff_inf.epochs = opts.epochs;
  plan.ff_inf.batch_size = opts.batch_size;

  eval::ResultTable table = eval::run_experiment(plan, train, train_ext, test);
  std::string rendered = eval::render_table(table);
  std::fputs(rendered.c_str(), stdout);

  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / "results.json",
               eval::table_to_json(table).dump(2) + "\n");
    write_text(fs::path(opts.out_dir) / "results.txt", rendered);
    std::printf("results written to %s\n", opts.out_dir.c_str());
  }
}

// ---------------------------------------------------------------------------
// report

void run_report(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw std::invalid_argument("cannot read results file " + in_path);
  eval::ResultTable table = eval::table_from_json(json::parse(in));
  std::string rendered = eval::render_table(table);
  if (out_path.empty())
    std::fputs(rendered.c_str(), stdout);
  else
    write_text(out_path, rendered);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian networks over tabular data and text embeddings"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim_cmd->add_option("--config", sim.config_path, "JSON config file");
  sim_cmd->add_option("--seed", sim.seed, "master seed");
  sim_cmd->add_option("--out", sim.out_dir, "output directory")->required();
  sim_cmd->add_option("--ground-truth", sim.ground_truth_path,
                      "ground-truth network JSON (default: built-in example)");
  sim_cmd->add_option("--n-train", sim.n_train, "training records");
  sim_cmd->add_option("--n-test", sim.n_test, "test records");
  sim_cmd->add_option("--dim", sim.embedder.dim, "embedding dimension");
  sim_cmd->add_option("--noise", sim.embedder.noise_sigma, "embedding noise sigma");
  sim_cmd->add_option("--distractor", sim.embedder.distractor_scale,
                      "off-topic distractor scale");
  sim_cmd->add_option("--prototype-scale", sim.embedder.prototype_scale,
                      "symptom prototype scale");

  TrainOpts tr;
  CLI::App* tr_cmd = app.add_subcommand("train", "fit a model checkpoint");
  tr_cmd->add_option("--model", tr.model, "bn|bnpp|ff|gen|discr")->required();
  tr_cmd->add_flag("--ablate", tr.ablate, "drop the diagnosis-text arcs");
  tr_cmd->add_option("--data", tr.data_path, "records file (JSONL)")->required();
  tr_cmd->add_option("--embeddings", tr.embeddings_path, "embeddings file (JSONL)");
  tr_cmd->add_option("--config", tr.config_path, "JSON config file");
  tr_cmd->add_option("--seed", tr.seed, "training seed");
  tr_cmd->add_option("--alpha", tr.alpha, "covariance shrinkage toward identity");
  tr_cmd->add_option("--epochs", tr.cls.epochs, "training epochs");
  tr_cmd->add_option("--batch-size", tr.cls.batch_size, "batch size");
  tr_cmd->add_option("--lr", tr.cls.learning_rate, "learning rate");
  tr_cmd->add_option("--weight-decay", tr.cls.weight_decay, "weight decay");
  tr_cmd->add_option("--prior-lr", tr.cls.prior_learning_rate,
                     "learning rate for the season prior (and ablated rows)");
  tr_cmd->add_option("--hidden", tr.cls.hidden, "hidden width of the pneu nets");
  tr_cmd->add_flag("--diag-cov", tr.diagonal, "diagonal covariance mode");
  tr_cmd->add_option("--out", tr.out_dir, "checkpoint directory")->required();

  InferOpts inf;
  CLI::App* inf_cmd = app.add_subcommand("infer", "posteriors for one record");
  inf_cmd->add_option("--checkpoint", inf.checkpoint, "checkpoint directory")
      ->required();
  inf_cmd->add_option("--record", inf.record_inline, "record as inline JSON");
  inf_cmd->add_option("--record-file", inf.record_file, "record JSON file");
  inf_cmd->add_option("--embeddings", inf.embeddings_path, "embeddings file");
  inf_cmd->add_option("--evidence", inf.evidence, "bst|bs|bt (default bst)");

  EvaluateOpts ev;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "multi-seed experiment plan");
  ev_cmd->add_option("--data", ev.data_dir, "dataset directory from `simulate`")
      ->required();
  ev_cmd->add_option("--out", ev.out_dir, "results directory");
  ev_cmd->add_option("--models", ev.models, "comma list of models");
  ev_cmd->add_option("--seeds", ev.n_seeds, "number of seeds (0..n-1)");
  ev_cmd->add_option("--config", ev.config_path, "JSON config file");
  ev_cmd->add_option("--alpha", ev.alpha, "covariance shrinkage toward identity");
  ev_cmd->add_option("--epochs", ev.epochs, "training epochs");
  ev_cmd->add_option("--batch-size", ev.batch_size, "batch size");
  ev_cmd->add_flag("--diag-cov", ev.diagonal, "diagonal covariance mode");

  std::string report_in, report_out;
  CLI::App* rep_cmd = app.add_subcommand("report", "render a results table");
  rep_cmd->add_option("--in", report_in, "results.json from `evaluate`")->required();
  rep_cmd->add_option("--out", report_out, "output text file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (*sim_cmd) run_simulate(sim_cmd, sim);
    if (*tr_cmd) run_train(tr_cmd, tr);
    if (*inf_cmd) run_infer(inf);
    if (*ev_cmd) run_evaluate(ev_cmd, ev);
    if (*rep_cmd) run_report(report_in, report_out);
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const ZeroEvidenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
