#pragma once

#include <cstdint>
#include <vector>

#include "hbn/core/matrix.hpp"

namespace hbn::datasim {

// Variable names and level labels shared by the simulator, the models and
// the CLI. Level index 0 is always "no"/"warm"/"none".
namespace clinic {
inline constexpr const char* kSeason = "season";
inline constexpr const char* kPneu = "pneu";
inline constexpr const char* kInf = "inf";
inline constexpr const char* kDysp = "dysp";
inline constexpr const char* kCough = "cough";
inline constexpr const char* kFever = "fever";
inline constexpr const char* kPain = "pain";
inline constexpr const char* kNasal = "nasal";
}  // namespace clinic

// One patient encounter. Season and the diagnoses are always observed;
// dysp/cough/nasal are -1 when masked; fever/pain are -1 when the record
// belongs to the dataset variant that drops them. The embedding is empty
// whenever text_present is false.
struct PatientRecord {
  std::int64_t id = 0;
  int season = 0;
  int pneu = 0;
  int inf = 0;
  int dysp = -1;
  int cough = -1;
  int nasal = -1;
  int fever = -1;
  int pain = -1;
  bool text_present = false;
  Vec embedding;
};

struct DatasetSplit {
  std::vector<PatientRecord> records;
  Vec empty_text;
  std::size_t dim = 0;
};

struct DatasetBundle {
  DatasetSplit train;
  DatasetSplit test;
};

}  // namespace hbn::datasim
