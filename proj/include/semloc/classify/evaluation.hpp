// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "semloc/common.hpp"

namespace semloc {

struct EvaluationReport {
  std::vector<std::string> categories;
  /// confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  double accuracy = 0.0;
  std::vector<double> precision;  ///< 0 when nothing was predicted as the class
  std::vector<double> recall;     ///< 0 when the class has no test samples

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : confusion)
      for (auto v : row) n += v;
    return n;
  }
  std::size_t correct() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < confusion.size(); ++i) n += confusion[i][i];
    return n;
  }

  bool operator==(const EvaluationReport&) const = default;
};

/// Rebuilds accuracy, precision and recall from the confusion matrix.
inline void recompute_metrics(EvaluationReport& r) {
  const std::size_t nc = r.categories.size();
  const std::size_t total = r.total();
  r.accuracy = total ? static_cast<double>(r.correct()) / static_cast<double>(total) : 0.0;
  r.precision.assign(nc, 0.0);
  r.recall.assign(nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t predicted = 0, actual = 0;
    for (std::size_t o = 0; o < nc; ++o) {
      predicted += r.confusion[o][c];
      actual += r.confusion[c][o];
    }
    if (predicted) r.precision[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(predicted);
    if (actual) r.recall[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(actual);
  }
}

inline EvaluationReport evaluate(const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& truth,
                                 const std::vector<std::string>& categories) {
  if (predictions.size() != truth.size())
    throw InvalidArgument("evaluate: " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(truth.size()) + " ground-truth labels");
  EvaluationReport r;
  r.categories = categories;
  r.confusion.assign(categories.size(), std::vector<std::size_t>(categories.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= categories.size() || predictions[i] >= categories.size())
      throw InvalidArgument("evaluate: label outside the category set at sample " + std::to_string(i));
    ++r.confusion[truth[i]][predictions[i]];
  }
  recompute_metrics(r);
  return r;
}

}  // namespace semloc
