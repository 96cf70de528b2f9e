// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "semloc/bow/dictionary.hpp"

namespace semloc {

/// Relative word frequencies of one cloud. A cloud without features gets the
/// all-zero histogram with `empty` set.
struct BoWDescriptor {
  std::vector<double> histogram;
  bool empty = false;
  std::string source;
  std::optional<std::string> label;

  std::size_t size() const { return histogram.size(); }
};

/// Nearest word by Euclidean distance, lowest index on ties.
inline std::size_t assign_word(const Dictionary& dictionary, std::span<const float> feature) {
  if (dictionary.words.empty()) throw InvalidArgument("assign_word: empty dictionary");
  if (feature.size() != dictionary.words.front().size())
    throw InvalidArgument("assign_word: feature dimension " + std::to_string(feature.size()) +
                          " does not match dictionary dimension " + std::to_string(dictionary.words.front().size()));
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < dictionary.words.size(); ++w) {
    const double d2 = detail::squared_distance(feature.data(), dictionary.words[w].data(), feature.size());
    if (d2 < best_d2) {
      best_d2 = d2;
      best = w;
    }
  }
  return best;
}

inline std::size_t assign_word(const Dictionary& dictionary, const FeatureVector& feature) {
  if (feature.kind != dictionary.kind) throw InvalidArgument("assign_word: descriptor kind mismatch");
  return assign_word(dictionary, std::span<const float>(feature.values));
}

/// Histogram of word assignments divided by the feature count.
inline BoWDescriptor compute_bow_descriptor(const Dictionary& dictionary, const FeatureSet& features) {
  if (features.kind != dictionary.kind)
    throw InvalidArgument("compute_bow_descriptor: features are " + std::string(descriptor_name(features.kind)) +
                          ", dictionary is " + std::string(descriptor_name(dictionary.kind)));
  BoWDescriptor out;
  out.source = features.source;
  out.histogram.assign(dictionary.k(), 0.0);
  if (features.empty()) {
    out.empty = true;
    return out;
  }
  std::vector<std::size_t> words(features.size());
  parallel_for(features.size(), [&](std::size_t i) { words[i] = assign_word(dictionary, features.vectors[i]); });
  for (std::size_t w : words) out.histogram[w] += 1.0;
  const double n = static_cast<double>(features.size());
  for (double& v : out.histogram) v /= n;
  return out;
}

}  // namespace semloc
