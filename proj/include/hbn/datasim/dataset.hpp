#pragma once

#include <filesystem>
#include <json.hpp>

#include "hbn/datasim/embedder.hpp"
#include "hbn/datasim/record.hpp"
#include "hbn/datasim/structures.hpp"

namespace hbn::datasim {

// Samples train and test records from the ground truth, attaches embeddings
// computed from the full five-symptom state, then masks the train split:
// after a seeded shuffle the first third loses its symptom values, the
// second third its text, and the remainder (which absorbs any remainder of
// n_train/3) stays fully observed. The test split is fully observed.
// Byte-identical output per seed. Record ids are globally unique (test ids
// continue after the train ids).
DatasetBundle build_dataset(const discrete::DiscreteBn& ground_truth,
                            const Embedder& embedder, std::size_t n_train,
                            std::size_t n_test, std::uint64_t seed);

// One JSON object per line. The extended variant keeps fever and pain.
void save_records(const std::vector<PatientRecord>& records, bool extended,
                  const std::filesystem::path& path);
std::vector<PatientRecord> load_records(const std::filesystem::path& path);

// Record schema plus an optional inline "vec" holding the text embedding.
PatientRecord record_from_json(const nlohmann::ordered_json& j);

// One {"id": ..., "vec": [...]} per line, "__empty__" entry first. Only
// text-carrying records appear.
void save_embeddings(const DatasetSplit& split, const std::filesystem::path& path);

// Joins a record file with an embedding file by id and validates the
// invariants (dimensions consistent, text-present records all covered,
// text-absent records without an entry).
DatasetSplit load_external(const std::filesystem::path& records_path,
                           const std::filesystem::path& embeddings_path);

}  // namespace hbn::datasim
