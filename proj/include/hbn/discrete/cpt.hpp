#pragma once

#include <span>
#include <string>
#include <vector>

#include "hbn/core/matrix.hpp"
#include "hbn/discrete/variable.hpp"

namespace hbn::discrete {

// Conditional probability table: one probability row per configuration of the
// parent variables, rows in row-major order over parent levels (first parent
// varies slowest). Rows sum to one.
class Cpt {
 public:
  Cpt(std::string child, std::size_t child_cardinality,
      std::vector<std::string> parents,
      std::vector<std::size_t> parent_cardinalities, Matrix table);

  const std::string& child() const { return child_; }
  const std::vector<std::string>& parents() const { return parents_; }
  const std::vector<std::size_t>& parent_cardinalities() const {
    return parent_cardinalities_;
  }
  std::size_t child_cardinality() const { return table_.cols; }
  std::size_t row_count() const { return table_.rows; }

  std::size_t row_index(std::span<const int> parent_levels) const;
  std::span<const double> row(std::size_t index) const { return table_.row_span(index); }
  double prob(std::size_t row, int child_level) const {
    return table_(row, static_cast<std::size_t>(child_level));
  }
  const Matrix& table() const { return table_; }

 private:
  std::string child_;
  std::vector<std::string> parents_;
  std::vector<std::size_t> parent_cardinalities_;
  Matrix table_;
};

// Maximum-likelihood fit with add-one (Dirichlet(1)) smoothing per cell:
//   P(child = v | cfg) = (count(cfg, v) + 1) / (count(cfg) + |child levels|).
// A record contributes only when it observes the child and every parent;
// others are skipped. A record holding an out-of-range level index is
// rejected with its index in the message.
Cpt fit_cpt_mle_k2(const std::vector<Assignment>& records,
                   const VariableSpec& child,
                   const std::vector<VariableSpec>& parents);

}  // namespace hbn::discrete
