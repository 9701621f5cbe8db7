#include "hbn/datasim/embedder.hpp"

#include <cmath>
#include <stdexcept>

namespace hbn::datasim {

namespace {

Vec unit_vector(Rng& rng, std::size_t dim) {
  Vec v(dim);
  double norm2 = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm2 += x * x;
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace

SyntheticEmbedder::SyntheticEmbedder(SyntheticEmbedderConfig cfg,
                                     std::uint64_t seed)
    : cfg_(cfg) {
  if (cfg_.dim == 0) throw std::invalid_argument("embedder dimension must be positive");
  if (cfg_.noise_sigma < 0.0 || cfg_.distractor_scale < 0.0)
    throw std::invalid_argument("noise and distractor scales must be non-negative");
  Rng proto = Rng::substream(seed, "embedder.prototypes");
  base_ = unit_vector(proto, cfg_.dim);
  for (auto& p : prototypes_) {
    p = unit_vector(proto, cfg_.dim);
    for (double& x : p) x *= cfg_.prototype_scale;
  }
  // The two fever levels share a direction at different intensities, like
  // stronger wording in a note for a higher fever.
  prototypes_[3] = prototypes_[2];
  for (double& x : prototypes_[3]) x *= 1.6;
  for (std::size_t idx : {0u, 1u, 5u})  // dysp, cough, nasal
    for (double& x : prototypes_[idx]) x *= cfg_.coded_attenuation;
  Rng empty = Rng::substream(seed, "embedder.empty");
  empty_ = unit_vector(empty, cfg_.dim);
}

Vec SyntheticEmbedder::embed(std::int64_t id, const SymptomState& state,
                             bool text_present,
                             std::uint64_t record_seed) const {
  (void)id;
  if (!text_present) return empty_;
  if (state.fever < 0 || state.fever > 2 || state.dysp < 0 || state.dysp > 1 ||
      state.cough < 0 || state.cough > 1 || state.pain < 0 || state.pain > 1 ||
      state.nasal < 0 || state.nasal > 1)
    throw std::invalid_argument("symptom state out of range");

  Vec v = base_;
  auto add = [&](const Vec& p) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += p[i];
  };
  if (state.dysp == 1) add(prototypes_[0]);
  if (state.cough == 1) add(prototypes_[1]);
  if (state.fever == 1) add(prototypes_[2]);
  if (state.fever == 2) add(prototypes_[3]);
  if (state.pain == 1) add(prototypes_[4]);
  if (state.nasal == 1) add(prototypes_[5]);

  Rng rng(record_seed);
  if (cfg_.noise_sigma > 0.0)
    for (double& x : v) x += cfg_.noise_sigma * rng.normal();
  if (cfg_.distractor_scale > 0.0) {
    Vec topic = unit_vector(rng, cfg_.dim);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += cfg_.distractor_scale * topic[i];
  }
  return v;
}

FileEmbedder::FileEmbedder(std::map<std::int64_t, Vec> table, Vec empty_text)
    : table_(std::move(table)), empty_(std::move(empty_text)) {
  if (empty_.empty())
    throw std::invalid_argument("file embedder needs the \"__empty__\" entry");
  for (const auto& [id, vec] : table_)
    if (vec.size() != empty_.size())
      throw std::invalid_argument("embedding for id " + std::to_string(id) +
                                  " has inconsistent dimension");
}

Vec FileEmbedder::embed(std::int64_t id, const SymptomState& state,
                        bool text_present, std::uint64_t record_seed) const {
  (void)state;
  (void)record_seed;
  if (!text_present) return empty_;
  auto it = table_.find(id);
  if (it == table_.end())
    throw std::invalid_argument("embedding file is missing id " +
                                std::to_string(id));
  return it->second;
}

}  // namespace hbn::datasim
