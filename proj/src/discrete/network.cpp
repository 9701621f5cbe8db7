#include "hbn/discrete/network.hpp"

#include <set>
#include <stdexcept>

#include "hbn/core/errors.hpp"

namespace hbn::discrete {

DiscreteBn::DiscreteBn(std::vector<VariableSpec> variables,
                       std::vector<Cpt> cpts)
    : variables_(std::move(variables)), cpts_(std::move(cpts)) {
  if (variables_.size() != cpts_.size())
    throw std::invalid_argument("network: need exactly one cpt per variable");

  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (v.cardinality() < 2)
      throw std::invalid_argument("variable " + v.name + ": cardinality < 2");
    std::set<std::string> lvls(v.levels.begin(), v.levels.end());
    if (lvls.size() != v.levels.size())
      throw std::invalid_argument("variable " + v.name + ": duplicate levels");
    if (!names.insert(v.name).second)
      throw std::invalid_argument("duplicate variable " + v.name);
  }

  parent_indices_.resize(cpts_.size());
  for (std::size_t i = 0; i < cpts_.size(); ++i) {
    const Cpt& c = cpts_[i];
    if (c.child() != variables_[i].name)
      throw std::invalid_argument("cpt order does not match variable order at " +
                                  variables_[i].name);
    if (c.child_cardinality() != variables_[i].cardinality())
      throw std::invalid_argument("cpt for " + c.child() + ": cardinality mismatch");
    for (std::size_t k = 0; k < c.parents().size(); ++k) {
      int p = variable_index(c.parents()[k]);
      if (p < 0)
        throw std::invalid_argument("cpt for " + c.child() + ": unknown parent " +
                                    c.parents()[k]);
      // Parents preceding children makes the declared order topological and
      // the graph acyclic.
      if (static_cast<std::size_t>(p) >= i)
        throw std::invalid_argument("cpt for " + c.child() + ": parent " +
                                    c.parents()[k] + " does not precede child");
      if (variables_[p].cardinality() != c.parent_cardinalities()[k])
        throw std::invalid_argument("cpt for " + c.child() +
                                    ": parent cardinality mismatch");
      parent_indices_[i].push_back(static_cast<std::size_t>(p));
    }
  }
}

DiscreteBn DiscreteBn::fit(const std::vector<NodeSpec>& structure,
                           const std::vector<Assignment>& records) {
  std::vector<VariableSpec> vars;
  for (const auto& n : structure) vars.push_back(n.variable);

  auto find_var = [&](const std::string& name) -> const VariableSpec& {
    for (const auto& v : vars)
      if (v.name == name) return v;
    throw std::invalid_argument("unknown parent " + name);
  };

  std::vector<Cpt> cpts;
  for (const auto& n : structure) {
    std::vector<VariableSpec> parents;
    for (const auto& p : n.parents) parents.push_back(find_var(p));
    cpts.push_back(fit_cpt_mle_k2(records, n.variable, parents));
  }
  return DiscreteBn(std::move(vars), std::move(cpts));
}

int DiscreteBn::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return static_cast<int>(i);
  return -1;
}

const VariableSpec& DiscreteBn::variable(const std::string& name) const {
  int i = variable_index(name);
  if (i < 0) throw std::invalid_argument("unknown variable " + name);
  return variables_[static_cast<std::size_t>(i)];
}

std::vector<int> DiscreteBn::to_levels(const Assignment& a) const {
  std::vector<int> levels(variables_.size(), -1);
  for (const auto& [name, value] : a.entries()) {
    int i = variable_index(name);
    if (i < 0) throw std::invalid_argument("unknown variable " + name);
    if (value < 0 ||
        static_cast<std::size_t>(value) >= variables_[i].cardinality())
      throw std::invalid_argument("level index out of range for " + name);
    levels[static_cast<std::size_t>(i)] = value;
  }
  return levels;
}

double DiscreteBn::joint_prob_levels(std::span<const int> full) const {
  double p = 1.0;
  std::vector<int> parent_levels;
  for (std::size_t i = 0; i < cpts_.size(); ++i) {
    parent_levels.clear();
    for (std::size_t pi : parent_indices_[i]) parent_levels.push_back(full[pi]);
    std::size_t row = cpts_[i].row_index(parent_levels);
    p *= cpts_[i].prob(row, full[i]);
  }
  return p;
}

double DiscreteBn::joint_prob(const Assignment& full) const {
  std::vector<int> levels = to_levels(full);
  std::string missing;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 0) missing += (missing.empty() ? "" : ", ") + variables_[i].name;
  if (!missing.empty())
    throw std::invalid_argument("joint_prob needs a full assignment; missing: " +
                                missing);
  return joint_prob_levels(levels);
}

Vec DiscreteBn::posterior(const std::string& query,
                          const Assignment& evidence) const {
  int q = variable_index(query);
  if (q < 0) throw std::invalid_argument("unknown query variable " + query);
  if (evidence.contains(query))
    throw std::invalid_argument("query " + query + " appears in the evidence");

  std::vector<int> levels = to_levels(evidence);
  std::vector<std::size_t> free_vars;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 0) free_vars.push_back(i);

  Vec mass(variables_[static_cast<std::size_t>(q)].cardinality(), 0.0);
  // Odometer enumeration over the unobserved variables.
  for (std::size_t f : free_vars) levels[f] = 0;
  while (true) {
    mass[static_cast<std::size_t>(levels[static_cast<std::size_t>(q)])] +=
        joint_prob_levels(levels);
    std::size_t k = 0;
    for (; k < free_vars.size(); ++k) {
      std::size_t v = free_vars[k];
      if (static_cast<std::size_t>(++levels[v]) < variables_[v].cardinality()) break;
      levels[v] = 0;
    }
    if (k == free_vars.size()) break;
  }

  double total = 0.0;
  for (double m : mass) total += m;
  if (total <= 0.0)
    throw ZeroEvidenceError("evidence has probability zero under the network");
  for (double& m : mass) m /= total;
  return mass;
}

void DiscreteBn::sample_levels(Rng& rng, std::vector<int>& out) const {
  out.assign(variables_.size(), 0);
  std::vector<int> parent_levels;
  for (std::size_t i = 0; i < cpts_.size(); ++i) {
    parent_levels.clear();
    for (std::size_t pi : parent_indices_[i]) parent_levels.push_back(out[pi]);
    std::size_t row = cpts_[i].row_index(parent_levels);
    out[i] = static_cast<int>(rng.categorical(cpts_[i].row(row)));
  }
}

std::vector<Assignment> DiscreteBn::ancestral_sample(std::size_t n,
                                                     std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Assignment> samples;
  samples.reserve(n);
  std::vector<int> levels;
  for (std::size_t s = 0; s < n; ++s) {
    sample_levels(rng, levels);
    Assignment a;
    for (std::size_t i = 0; i < variables_.size(); ++i)
      a.set(variables_[i].name, levels[i]);
    samples.push_back(std::move(a));
  }
  return samples;
}

nlohmann::json DiscreteBn::to_json() const {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : variables_)
    vars.push_back({{"name", v.name}, {"levels", v.levels}});

  nlohmann::json cpts = nlohmann::json::array();
  for (const auto& c : cpts_) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < c.row_count(); ++r) {
      auto row = c.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    cpts.push_back({{"child", c.child()}, {"parents", c.parents()}, {"rows", rows}});
  }
  return {{"variables", vars}, {"cpts", cpts}};
}

DiscreteBn DiscreteBn::from_json(const nlohmann::json& j) {
  std::vector<VariableSpec> vars;
  for (const auto& v : j.at("variables"))
    vars.push_back({v.at("name").get<std::string>(),
                    v.at("levels").get<std::vector<std::string>>()});

  auto cardinality_of = [&](const std::string& name) -> std::size_t {
    for (const auto& v : vars)
      if (v.name == name) return v.cardinality();
    throw std::invalid_argument("cpt references unknown variable " + name);
  };

  std::vector<Cpt> cpts;
  for (const auto& c : j.at("cpts")) {
    auto child = c.at("child").get<std::string>();
    auto parents = c.at("parents").get<std::vector<std::string>>();
    auto rows = c.at("rows").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument("cpt for " + child + ": no rows");
    Matrix table(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != table.cols)
        throw std::invalid_argument("cpt for " + child + ": ragged rows");
      for (std::size_t k = 0; k < table.cols; ++k) table(r, k) = rows[r][k];
    }
    std::vector<std::size_t> parent_cards;
    for (const auto& p : parents) parent_cards.push_back(cardinality_of(p));
    cpts.emplace_back(child, cardinality_of(child), parents, parent_cards,
                      std::move(table));
  }
  return DiscreteBn(std::move(vars), std::move(cpts));
}

}  // namespace hbn::discrete
