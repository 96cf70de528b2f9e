// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "semloc/common.hpp"

namespace semloc {

/// Fixed-dimension vectors with labels drawn from a category set.
struct LabeledDataset {
  std::vector<std::vector<double>> descriptors;
  std::vector<std::size_t> labels;  ///< indices into categories
  std::vector<std::string> categories;

  std::size_t size() const { return descriptors.size(); }
  bool empty() const { return descriptors.empty(); }
  std::size_t dimension() const { return descriptors.empty() ? 0 : descriptors.front().size(); }

  void add(std::vector<double> x, std::size_t label) {
    descriptors.push_back(std::move(x));
    labels.push_back(label);
  }

  std::size_t category_index(const std::string& name) const {
    const auto it = std::find(categories.begin(), categories.end(), name);
    if (it == categories.end()) throw DataError("label '" + name + "' is not in the category set");
    return static_cast<std::size_t>(it - categories.begin());
  }

  void validate() const {
    if (descriptors.size() != labels.size()) throw InvalidArgument("dataset: descriptors and labels differ in length");
    const std::size_t dim = dimension();
    for (std::size_t i = 0; i < size(); ++i) {
      if (descriptors[i].size() != dim) throw InvalidArgument("dataset: inhomogeneous descriptor dimension");
      if (labels[i] >= categories.size()) throw InvalidArgument("dataset: label outside the category set");
    }
  }

  std::size_t distinct_labels() const {
    std::vector<bool> seen(categories.size(), false);
    std::size_t n = 0;
    for (auto l : labels)
      if (l < seen.size() && !seen[l]) seen[l] = true, ++n;
    return n;
  }
};

}  // namespace semloc
