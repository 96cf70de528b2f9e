// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <numeric>

#include "semloc/classify/dataset.hpp"
#include "semloc/classify/kernel.hpp"

namespace semloc {

enum class KnnDistance { euclidean, chi_square };

inline std::string_view knn_distance_name(KnnDistance d) {
  return d == KnnDistance::euclidean ? "euclidean" : "chi_square";
}

inline KnnDistance parse_knn_distance(std::string_view name) {
  if (name == "euclidean") return KnnDistance::euclidean;
  if (name == "chi_square") return KnnDistance::chi_square;
  throw InvalidArgument("unknown knn distance '" + std::string(name) + "' (supported: euclidean, chi_square)");
}

/// The training set is the model.
struct KnnModel {
  LabeledDataset data;
  std::size_t k = 7;
  KnnDistance distance = KnnDistance::euclidean;
};

/// Builds a model; k is clamped to the dataset size.
inline KnnModel knn_train(LabeledDataset data, std::size_t k = 7, KnnDistance distance = KnnDistance::euclidean) {
  data.validate();
  if (data.empty()) throw InvalidArgument("knn_train: empty dataset");
  if (k == 0) throw InvalidArgument("knn_train: k must be positive");
  KnnModel model{std::move(data), k, distance};
  model.k = std::min(model.k, model.data.size());
  return model;
}

struct Prediction {
  std::size_t label = 0;
  /// Per-category votes, aligned with the model's category list.
  std::vector<double> votes;
  /// votes normalized to sum 1.
  std::vector<double> scores;
};

/// Majority vote among the k nearest training vectors. Distance ties go to the
/// lower training index; vote ties go to the tied class whose member appears
/// first in the neighbor ranking (the nearest neighbor's class when it is tied).
inline Prediction knn_classify(const KnnModel& model, std::span<const double> x) {
  const auto& data = model.data;
  if (data.empty()) throw InvalidArgument("knn_classify: empty model");
  if (x.size() != data.dimension())
    throw InvalidArgument("knn_classify: query dimension " + std::to_string(x.size()) + " vs model " +
                          std::to_string(data.dimension()));
  std::vector<std::pair<double, std::size_t>> ranked(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double d = 0.0;
    if (model.distance == KnnDistance::chi_square) {
      d = chi_square_distance(x, data.descriptors[i]);
    } else {
      for (std::size_t j = 0; j < x.size(); ++j) d += (x[j] - data.descriptors[i][j]) * (x[j] - data.descriptors[i][j]);
    }
    ranked[i] = {d, i};
  }
  const std::size_t k = std::min(model.k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());

  Prediction p;
  p.votes.assign(data.categories.size(), 0.0);
  for (std::size_t i = 0; i < k; ++i) p.votes[data.labels[ranked[i].second]] += 1.0;
  const double top = *std::max_element(p.votes.begin(), p.votes.end());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t c = data.labels[ranked[i].second];
    if (p.votes[c] == top) {
      p.label = c;
      break;
    }
  }
  p.scores = p.votes;
  for (double& s : p.scores) s /= static_cast<double>(k);
  return p;
}

}  // namespace semloc
