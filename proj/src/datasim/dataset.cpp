#include "hbn/datasim/dataset.hpp"

#include <fstream>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

namespace hbn::datasim {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kEmptyKey = "__empty__";

int season_from_label(const std::string& s) {
  if (s == "warm") return 0;
  if (s == "cold") return 1;
  throw std::invalid_argument("unknown season label " + s);
}

int fever_from_label(const std::string& s) {
  if (s == "none") return 0;
  if (s == "low") return 1;
  if (s == "high") return 2;
  throw std::invalid_argument("unknown fever label " + s);
}

ordered_json nullable(int v) {
  if (v < 0) return nullptr;
  return v;
}

int from_nullable(const ordered_json& j) {
  if (j.is_null()) return -1;
  return j.get<int>();
}

}  // namespace

DatasetBundle build_dataset(const discrete::DiscreteBn& ground_truth,
                            const Embedder& embedder, std::size_t n_train,
                            std::size_t n_test, std::uint64_t seed) {
  const char* needed[] = {clinic::kSeason, clinic::kPneu, clinic::kInf,
                          clinic::kDysp,   clinic::kCough, clinic::kFever,
                          clinic::kPain,   clinic::kNasal};
  std::vector<std::size_t> idx;
  for (const char* name : needed) {
    int i = ground_truth.variable_index(name);
    if (i < 0)
      throw std::invalid_argument(std::string("ground truth is missing ") + name);
    idx.push_back(static_cast<std::size_t>(i));
  }

  Rng data = Rng::substream(seed, "data");
  const std::uint64_t embed_base = Rng::mix(seed, Rng::hash_label("embed"));

  auto make_records = [&](std::size_t count, std::int64_t first_id) {
    std::vector<PatientRecord> records;
    records.reserve(count);
    std::vector<int> levels;
    for (std::size_t k = 0; k < count; ++k) {
      ground_truth.sample_levels(data, levels);
      PatientRecord r;
      r.id = first_id + static_cast<std::int64_t>(k);
      r.season = levels[idx[0]];
      r.pneu = levels[idx[1]];
      r.inf = levels[idx[2]];
      r.dysp = levels[idx[3]];
      r.cough = levels[idx[4]];
      r.fever = levels[idx[5]];
      r.pain = levels[idx[6]];
      r.nasal = levels[idx[7]];
      r.text_present = true;
      SymptomState state{r.dysp, r.cough, r.fever, r.pain, r.nasal};
      r.embedding = embedder.embed(
          r.id, state, true, Rng::mix(embed_base, static_cast<std::uint64_t>(r.id)));
      records.push_back(std::move(r));
    }
    return records;
  };

  DatasetBundle bundle;
  bundle.train.records = make_records(n_train, 0);
  bundle.test.records =
      make_records(n_test, static_cast<std::int64_t>(n_train));
  bundle.train.empty_text = embedder.empty_text();
  bundle.test.empty_text = embedder.empty_text();
  bundle.train.dim = embedder.dim();
  bundle.test.dim = embedder.dim();

  // Masking pass: symptoms for the first third, text for the second, the
  // rest fully observed. Field values themselves never change.
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle = Rng::substream(seed, "shuffle");
  shuffle.shuffle(order);
  const std::size_t third = n_train / 3;
  for (std::size_t k = 0; k < n_train; ++k) {
    PatientRecord& r = bundle.train.records[order[k]];
    if (k < third) {
      r.dysp = r.cough = r.nasal = -1;
    } else if (k < 2 * third) {
      r.text_present = false;
      r.embedding.clear();
    }
  }
  return bundle;
}

void save_records(const std::vector<PatientRecord>& records, bool extended,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    ordered_json j;
    j["id"] = r.id;
    j["season"] = r.season == 0 ? "warm" : "cold";
    j["pneu"] = r.pneu;
    j["inf"] = r.inf;
    j["dysp"] = nullable(r.dysp);
    j["cough"] = nullable(r.cough);
    j["nasal"] = nullable(r.nasal);
    if (extended) {
      if (r.fever < 0 || r.pain < 0)
        throw std::invalid_argument(
            "record " + std::to_string(r.id) +
            " lacks fever/pain; cannot write the extended variant");
      j["fever"] = std::vector<std::string>{"none", "low", "high"}
          [static_cast<std::size_t>(r.fever)];
      j["pain"] = r.pain;
    }
    j["text_present"] = r.text_present;
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

PatientRecord record_from_json(const ordered_json& j) {
  PatientRecord r;
  r.id = j.at("id").get<std::int64_t>();
  r.season = season_from_label(j.at("season").get<std::string>());
  r.pneu = j.at("pneu").get<int>();
  r.inf = j.at("inf").get<int>();
  r.dysp = from_nullable(j.at("dysp"));
  r.cough = from_nullable(j.at("cough"));
  r.nasal = from_nullable(j.at("nasal"));
  if (j.contains("fever")) r.fever = fever_from_label(j.at("fever").get<std::string>());
  if (j.contains("pain")) r.pain = j.at("pain").get<int>();
  r.text_present = j.at("text_present").get<bool>();
  if (j.contains("vec")) r.embedding = j.at("vec").get<Vec>();
  return r;
}

std::vector<PatientRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<PatientRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(ordered_json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return records;
}

void save_embeddings(const DatasetSplit& split,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  {
    ordered_json j;
    j["id"] = kEmptyKey;
    j["vec"] = split.empty_text;
    out << j.dump() << "\n";
  }
  for (const auto& r : split.records) {
    if (!r.text_present) continue;
    ordered_json j;
    j["id"] = r.id;
    j["vec"] = r.embedding;
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

DatasetSplit load_external(const std::filesystem::path& records_path,
                           const std::filesystem::path& embeddings_path) {
  DatasetSplit split;
  split.records = load_records(records_path);

  std::ifstream in(embeddings_path);
  if (!in) throw std::runtime_error("cannot read " + embeddings_path.string());
  std::map<std::int64_t, Vec> table;
  bool have_empty = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    Vec vec = j.at("vec").get<Vec>();
    if (split.dim == 0) split.dim = vec.size();
    if (vec.size() != split.dim)
      throw std::invalid_argument(embeddings_path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": inconsistent embedding dimension");
    if (j.at("id").is_string()) {
      if (j.at("id").get<std::string>() != kEmptyKey)
        throw std::invalid_argument(embeddings_path.string() + ":" +
                                    std::to_string(line_no) + ": bad id");
      split.empty_text = std::move(vec);
      have_empty = true;
    } else {
      table[j.at("id").get<std::int64_t>()] = std::move(vec);
    }
  }
  if (!have_empty)
    throw std::invalid_argument(embeddings_path.string() +
                                ": missing the \"__empty__\" entry");

  for (auto& r : split.records) {
    auto it = table.find(r.id);
    if (r.text_present) {
      if (it == table.end())
        throw std::invalid_argument("record " + std::to_string(r.id) +
                                    " has text but no embedding entry");
      r.embedding = it->second;
    } else if (it != table.end() && !it->second.empty()) {
      throw std::invalid_argument("record " + std::to_string(r.id) +
                                  " has no text but an embedding entry");
    }
  }
  return split;
}

}  // namespace hbn::datasim
