#pragma once

#include "hbn/datasim/record.hpp"
#include "hbn/discrete/network.hpp"

namespace hbn::datasim {

// Eight-variable generating structure: season drives both diagnoses; dysp
// depends on pneu, nasal on inf, and cough/fever/pain on both diagnoses.
std::vector<discrete::NodeSpec> ground_truth_structure();

// The six coded tabular variables (fever and pain dropped).
std::vector<discrete::NodeSpec> observed_model_structure();

// The six coded variables plus fever and pain, for the upper-bound baseline.
std::vector<discrete::NodeSpec> extended_model_structure();

// Shipped default ground truth. The probabilities are hand-authored
// illustrative values (rare pneumonia around 1%, common infection, strongly
// diagnostic symptoms) chosen so desk-scale runs show the intended
// qualitative behavior; they are not estimates from any clinical source.
discrete::DiscreteBn default_ground_truth();

// Observed fields of a record as an assignment; include_hidden adds fever
// and pain when the record carries them.
discrete::Assignment record_to_assignment(const PatientRecord& rec,
                                          bool include_hidden);

discrete::Assignment evidence_for_pattern(const PatientRecord& rec,
                                          bool symptoms, bool include_hidden);

}  // namespace hbn::datasim
