#pragma once

#include <span>

namespace hbn::eval {

// Average precision: records are ranked by descending score (ties keep
// their input order) and precision is averaged over the positive ranks.
// At least one positive label is required.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

// Area under the ROC curve (rank statistic with tie correction). Present
// only as a debugging metric; result tables report average precision.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace hbn::eval
