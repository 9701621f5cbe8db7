#pragma once

#include <cstdint>
#include <map>

#include "hbn/core/matrix.hpp"
#include "hbn/core/rng.hpp"

namespace hbn::datasim {

// Full symptom state driving a note's embedding. fever takes three levels;
// the others are binary. All five influence the text even though only three
// are ever coded in the tabular fields.
struct SymptomState {
  int dysp = 0;
  int cough = 0;
  int fever = 0;
  int pain = 0;
  int nasal = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual const Vec& empty_text() const = 0;
  virtual Vec embed(std::int64_t id, const SymptomState& state,
                    bool text_present, std::uint64_t record_seed) const = 0;
};

struct SyntheticEmbedderConfig {
  std::size_t dim = 32;
  double prototype_scale = 1.0;
  // The coded symptoms already live in the tabular fields; notes mention
  // them in passing, so their text signal is attenuated relative to the
  // never-coded fever and pain.
  double coded_attenuation = 0.1;
  double noise_sigma = 0.3;       // per-dimension Gaussian noise
  double distractor_scale = 0.4;  // off-topic content direction per record
};

// Stand-in for an encoded clinical note: a shared base vector, one prototype
// direction per active symptom level, per-dimension noise and a random
// off-topic distractor direction. Prototypes and the empty-text vector are
// unit vectors drawn once from the embedder seed; a record's noise comes
// from its own seed, so embeddings do not depend on generation order.
class SyntheticEmbedder : public Embedder {
 public:
  SyntheticEmbedder(SyntheticEmbedderConfig cfg, std::uint64_t seed);

  std::size_t dim() const override { return cfg_.dim; }
  const Vec& empty_text() const override { return empty_; }
  Vec embed(std::int64_t id, const SymptomState& state, bool text_present,
            std::uint64_t record_seed) const override;

  const SyntheticEmbedderConfig& config() const { return cfg_; }
  const Vec& base() const { return base_; }
  // index: 0=dysp, 1=cough, 2=fever-low, 3=fever-high, 4=pain, 5=nasal
  const Vec& prototype(std::size_t index) const { return prototypes_[index]; }

 private:
  SyntheticEmbedderConfig cfg_;
  Vec base_, empty_;
  std::array<Vec, 6> prototypes_;
};

// Embeddings looked up from an id-keyed table (externally encoded notes).
class FileEmbedder : public Embedder {
 public:
  FileEmbedder(std::map<std::int64_t, Vec> table, Vec empty_text);

  std::size_t dim() const override { return empty_.size(); }
  const Vec& empty_text() const override { return empty_; }
  Vec embed(std::int64_t id, const SymptomState& state, bool text_present,
            std::uint64_t record_seed) const override;

 private:
  std::map<std::int64_t, Vec> table_;
  Vec empty_;
};

}  // namespace hbn::datasim
