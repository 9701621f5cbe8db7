#include "hbn/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hbn::eval {

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  double positives_seen = 0.0;
  double sum_precision = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 1) {
      positives_seen += 1.0;
      sum_precision += positives_seen / static_cast<double>(k + 1);
    }
  }
  if (positives_seen == 0.0)
    throw std::invalid_argument("average precision needs at least one positive");
  return sum_precision / positives_seen;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Average ranks across ties, then the Mann-Whitney statistic.
  std::vector<double> rank(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double n_pos = 0.0, n_neg = 0.0, rank_sum = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == 1) {
      n_pos += 1.0;
      rank_sum += rank[k];
    } else {
      n_neg += 1.0;
    }
  }
  if (n_pos == 0.0 || n_neg == 0.0)
    throw std::invalid_argument("roc auc needs both classes");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace hbn::eval
