#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "hbn/core/rng.hpp"
#include "hbn/discrete/cpt.hpp"
#include "hbn/discrete/variable.hpp"

namespace hbn::discrete {

// Structure declaration for fitting: one entry per variable, parents listed
// by name and required to precede the child.
struct NodeSpec {
  VariableSpec variable;
  std::vector<std::string> parents;
};

// A DAG-factored joint distribution over categorical variables. Variables are
// stored in topological order (parents precede children) and each carries
// exactly one CPT. Instances are immutable after construction; concurrent
// queries are safe.
class DiscreteBn {
 public:
  DiscreteBn(std::vector<VariableSpec> variables, std::vector<Cpt> cpts);

  // K2-smoothed maximum-likelihood fit over partially observed records.
  static DiscreteBn fit(const std::vector<NodeSpec>& structure,
                        const std::vector<Assignment>& records);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const Cpt& cpt(std::size_t i) const { return cpts_[i]; }
  int variable_index(const std::string& name) const;
  const VariableSpec& variable(const std::string& name) const;

  // Probability of a full assignment: the product of one CPT entry per
  // variable. A partial assignment is an error naming the missing variables.
  double joint_prob(const Assignment& full) const;

  // Exact P(query | evidence) by enumeration over all completions of the
  // unobserved variables. Evidence with zero probability raises
  // ZeroEvidenceError. The result sums to one.
  Vec posterior(const std::string& query, const Assignment& evidence) const;

  // Top-down samples in topological order, deterministic per seed.
  std::vector<Assignment> ancestral_sample(std::size_t n,
                                           std::uint64_t seed) const;
  void sample_levels(Rng& rng, std::vector<int>& out) const;

  nlohmann::json to_json() const;
  static DiscreteBn from_json(const nlohmann::json& j);

  // Dense helpers used by the hybrid models; levels[i] = -1 means unset.
  std::vector<int> to_levels(const Assignment& a) const;
  double joint_prob_levels(std::span<const int> full) const;

 private:
  std::vector<VariableSpec> variables_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<std::size_t>> parent_indices_;  // aligned with cpts_
};

}  // namespace hbn::discrete
