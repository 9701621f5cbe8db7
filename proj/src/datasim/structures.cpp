#include "hbn/datasim/structures.hpp"

namespace hbn::datasim {

using discrete::Cpt;
using discrete::DiscreteBn;
using discrete::NodeSpec;
using discrete::VariableSpec;

namespace {

const std::vector<std::string> kBinary = {"no", "yes"};
const std::vector<std::string> kSeasonLevels = {"warm", "cold"};
const std::vector<std::string> kFeverLevels = {"none", "low", "high"};

Cpt make_cpt(const std::string& child, std::size_t child_card,
             const std::vector<std::string>& parents,
             const std::vector<std::size_t>& parent_cards,
             const std::vector<std::vector<double>>& rows) {
  Matrix table(rows.size(), child_card);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < child_card; ++c) table(r, c) = rows[r][c];
  return Cpt(child, child_card, parents, parent_cards, std::move(table));
}

}  // namespace

std::vector<NodeSpec> ground_truth_structure() {
  return {
      {{clinic::kSeason, kSeasonLevels}, {}},
      {{clinic::kPneu, kBinary}, {clinic::kSeason}},
      {{clinic::kInf, kBinary}, {clinic::kSeason}},
      {{clinic::kDysp, kBinary}, {clinic::kPneu}},
      {{clinic::kCough, kBinary}, {clinic::kPneu, clinic::kInf}},
      {{clinic::kFever, kFeverLevels}, {clinic::kPneu, clinic::kInf}},
      {{clinic::kPain, kBinary}, {clinic::kPneu, clinic::kInf}},
      {{clinic::kNasal, kBinary}, {clinic::kInf}},
  };
}

std::vector<NodeSpec> observed_model_structure() {
  return {
      {{clinic::kSeason, kSeasonLevels}, {}},
      {{clinic::kPneu, kBinary}, {clinic::kSeason}},
      {{clinic::kInf, kBinary}, {clinic::kSeason}},
      {{clinic::kDysp, kBinary}, {clinic::kPneu}},
      {{clinic::kCough, kBinary}, {clinic::kPneu, clinic::kInf}},
      {{clinic::kNasal, kBinary}, {clinic::kInf}},
  };
}

std::vector<NodeSpec> extended_model_structure() {
  auto spec = observed_model_structure();
  spec.push_back({{clinic::kFever, kFeverLevels}, {clinic::kPneu, clinic::kInf}});
  spec.push_back({{clinic::kPain, kBinary}, {clinic::kPneu, clinic::kInf}});
  return spec;
}

DiscreteBn default_ground_truth() {
  std::vector<VariableSpec> vars;
  for (const auto& n : ground_truth_structure()) vars.push_back(n.variable);

  std::vector<Cpt> cpts;
  cpts.push_back(make_cpt(clinic::kSeason, 2, {}, {}, {{0.5, 0.5}}));
  cpts.push_back(make_cpt(clinic::kPneu, 2, {clinic::kSeason}, {2},
                          {{0.994, 0.006}, {0.972, 0.028}}));
  cpts.push_back(make_cpt(clinic::kInf, 2, {clinic::kSeason}, {2},
                          {{0.65, 0.35}, {0.45, 0.55}}));
  cpts.push_back(make_cpt(clinic::kDysp, 2, {clinic::kPneu}, {2},
                          {{0.90, 0.10}, {0.30, 0.70}}));
  cpts.push_back(make_cpt(clinic::kCough, 2, {clinic::kPneu, clinic::kInf},
                          {2, 2},
                          {{0.93, 0.07}, {0.35, 0.65}, {0.20, 0.80}, {0.10, 0.90}}));
  // Fever and pain are driven almost entirely by pneumonia here, so the text
  // carries strong complementary signal for the rare diagnosis while adding
  // next to nothing for the common one.
  cpts.push_back(make_cpt(clinic::kFever, 3, {clinic::kPneu, clinic::kInf},
                          {2, 2},
                          {{0.92, 0.065, 0.015},
                           {0.90, 0.08, 0.02},
                           {0.06, 0.30, 0.64},
                           {0.05, 0.27, 0.68}}));
  cpts.push_back(make_cpt(clinic::kPain, 2, {clinic::kPneu, clinic::kInf},
                          {2, 2},
                          {{0.93, 0.07}, {0.91, 0.09}, {0.24, 0.76}, {0.22, 0.78}}));
  cpts.push_back(make_cpt(clinic::kNasal, 2, {clinic::kInf}, {2},
                          {{0.90, 0.10}, {0.25, 0.75}}));
  return DiscreteBn(std::move(vars), std::move(cpts));
}

discrete::Assignment record_to_assignment(const PatientRecord& rec,
                                          bool include_hidden) {
  discrete::Assignment a;
  a.set(clinic::kSeason, rec.season);
  a.set(clinic::kPneu, rec.pneu);
  a.set(clinic::kInf, rec.inf);
  if (rec.dysp >= 0) a.set(clinic::kDysp, rec.dysp);
  if (rec.cough >= 0) a.set(clinic::kCough, rec.cough);
  if (rec.nasal >= 0) a.set(clinic::kNasal, rec.nasal);
  if (include_hidden) {
    if (rec.fever >= 0) a.set(clinic::kFever, rec.fever);
    if (rec.pain >= 0) a.set(clinic::kPain, rec.pain);
  }
  return a;
}

discrete::Assignment evidence_for_pattern(const PatientRecord& rec,
                                          bool symptoms, bool include_hidden) {
  discrete::Assignment a;
  a.set(clinic::kSeason, rec.season);
  if (symptoms) {
    if (rec.dysp >= 0) a.set(clinic::kDysp, rec.dysp);
    if (rec.cough >= 0) a.set(clinic::kCough, rec.cough);
    if (rec.nasal >= 0) a.set(clinic::kNasal, rec.nasal);
    if (include_hidden) {
      if (rec.fever >= 0) a.set(clinic::kFever, rec.fever);
      if (rec.pain >= 0) a.set(clinic::kPain, rec.pain);
    }
  }
  return a;
}

}  // namespace hbn::datasim
