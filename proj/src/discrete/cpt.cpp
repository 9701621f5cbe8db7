#include "hbn/discrete/cpt.hpp"

#include <cmath>
#include <stdexcept>

namespace hbn::discrete {

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t c : v) p *= c;
  return p;
}

}  // namespace

Cpt::Cpt(std::string child, std::size_t child_cardinality,
         std::vector<std::string> parents,
         std::vector<std::size_t> parent_cardinalities, Matrix table)
    : child_(std::move(child)),
      parents_(std::move(parents)),
      parent_cardinalities_(std::move(parent_cardinalities)),
      table_(std::move(table)) {
  if (parents_.size() != parent_cardinalities_.size())
    throw std::invalid_argument("cpt: parents and cardinalities differ in length");
  if (table_.rows != product(parent_cardinalities_))
    throw std::invalid_argument("cpt for " + child_ +
                                ": row count does not match parent cardinalities");
  if (table_.cols != child_cardinality)
    throw std::invalid_argument("cpt for " + child_ + ": column count mismatch");
  for (std::size_t r = 0; r < table_.rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < table_.cols; ++c) {
      double p = table_(r, c);
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("cpt for " + child_ + ": entry outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("cpt for " + child_ + ": row " +
                                  std::to_string(r) + " sums to " +
                                  std::to_string(sum));
  }
}

std::size_t Cpt::row_index(std::span<const int> parent_levels) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < parents_.size(); ++k)
    idx = idx * parent_cardinalities_[k] +
          static_cast<std::size_t>(parent_levels[k]);
  return idx;
}

Cpt fit_cpt_mle_k2(const std::vector<Assignment>& records,
                   const VariableSpec& child,
                   const std::vector<VariableSpec>& parents) {
  std::vector<std::size_t> parent_cards;
  std::vector<std::string> parent_names;
  for (const auto& p : parents) {
    parent_cards.push_back(p.cardinality());
    parent_names.push_back(p.name);
  }
  const std::size_t rows = [&] {
    std::size_t r = 1;
    for (std::size_t c : parent_cards) r *= c;
    return r;
  }();
  const std::size_t card = child.cardinality();

  Matrix counts(rows, card);
  std::vector<int> levels(parents.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const Assignment& rec = records[r];
    auto cv = rec.get(child.name);
    if (!cv) continue;  // child unobserved: no contribution to this table
    if (*cv < 0 || static_cast<std::size_t>(*cv) >= card)
      throw std::invalid_argument("record " + std::to_string(r) +
                                  ": level index out of range for " + child.name);
    bool all_parents = true;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      auto pv = rec.get(parents[k].name);
      if (!pv) {
        all_parents = false;
        break;
      }
      if (*pv < 0 || static_cast<std::size_t>(*pv) >= parent_cards[k])
        throw std::invalid_argument("record " + std::to_string(r) +
                                    ": level index out of range for " +
                                    parents[k].name);
      levels[k] = *pv;
    }
    if (!all_parents) continue;

    std::size_t idx = 0;
    for (std::size_t k = 0; k < parents.size(); ++k)
      idx = idx * parent_cards[k] + static_cast<std::size_t>(levels[k]);
    counts(idx, static_cast<std::size_t>(*cv)) += 1.0;
  }

  Matrix table(rows, card);
  for (std::size_t r = 0; r < rows; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < card; ++c) total += counts(r, c);
    for (std::size_t c = 0; c < card; ++c)
      table(r, c) = (counts(r, c) + 1.0) / (total + static_cast<double>(card));
  }
  return Cpt(child.name, card, parent_names, parent_cards, std::move(table));
}

}  // namespace hbn::discrete
