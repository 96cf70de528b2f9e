// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "semloc/features/feature_set.hpp"

namespace semloc {

/// Visual vocabulary: k centroids in descriptor space plus training provenance.
struct Dictionary {
  DescriptorKind kind = DescriptorKind::pfh;
  std::vector<std::vector<float>> words;
  std::uint64_t seed = 0;
  std::uint32_t iterations = 0;
  double inertia = 0.0;
  /// Inertia after every assignment step, in order.
  std::vector<double> inertia_history;

  std::size_t k() const { return words.size(); }
  std::size_t dimension() const { return descriptor_dimension(kind); }
};

struct KMeansOptions {
  std::size_t max_iters = 100;
  double tol = 1e-4;
};

namespace detail {

template <typename A, typename B>
double squared_distance(const A* a, const B* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

/// Index of the nearest centroid (lowest index on ties) and its squared distance.
template <typename T>
std::pair<std::size_t, double> nearest_centroid(const T* x, const std::vector<std::vector<double>>& centroids,
                                                std::size_t dim) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    // Partial sums only grow, so a candidate can be abandoned once it is no better.
    const double* w = centroids[c].data();
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim && d2 < best_d2; ++i) {
      const double d = static_cast<double>(x[i]) - w[i];
      d2 += d * d;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return {best, best_d2};
}

}  // namespace detail

/// Lloyd's k-means over row pointers with k-means++ seeding.
///
/// Stops when an assignment step leaves every label unchanged, when the
/// largest centroid move falls below tol, or after max_iters updates. A
/// cluster left empty by an update is re-seeded with the point farthest from
/// its own centroid. The inertia recorded after each assignment step never
/// increases. Assignment runs in parallel; every reduction walks points in
/// index order, so results do not depend on the thread count.
inline Dictionary kmeans(std::span<const float* const> rows, std::size_t dim, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& options = {}) {
  const std::size_t n = rows.size();
  if (k == 0) throw InvalidArgument("build_dictionary: k must be positive");
  if (k > n)
    throw InvalidArgument("build_dictionary: k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                          " available features");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  {
    std::vector<bool> chosen(n, false);
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::size_t pick = first(rng);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
      if (c > 0) {
        double total = 0.0;
        for (double v : d2) total += v;
        if (total > 0.0) {
          std::uniform_real_distribution<double> u(0.0, total);
          double r = u(rng);
          pick = n;
          for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            pick = i;
            r -= d2[i];
            if (r < 0.0) break;
          }
        } else {
          pick = 0;
          while (pick < n && chosen[pick]) ++pick;
          if (pick == n) pick = 0;
        }
      }
      chosen[pick] = true;
      centroids.emplace_back(rows[pick], rows[pick] + dim);
      parallel_for(n, [&](std::size_t i) {
        d2[i] = std::min(d2[i], detail::squared_distance(rows[i], centroids.back().data(), dim));
      });
    }
  }

  Dictionary dict;
  dict.seed = seed;
  std::vector<std::size_t> labels(n, k), previous;
  std::vector<double> dist2(n, 0.0);

  auto assign = [&] {
    parallel_for(n, [&](std::size_t i) {
      const auto [c, d2] = detail::nearest_centroid(rows[i], centroids, dim);
      labels[i] = c;
      dist2[i] = d2;
    });
    double inertia = 0.0;
    for (double v : dist2) inertia += v;
    dict.inertia_history.push_back(inertia);
  };

  assign();
  std::uint32_t iterations = 0;
  while (iterations < options.max_iters) {
    // Update step: means in index order.
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[labels[i]];
      for (std::size_t j = 0; j < dim; ++j) s[j] += rows[i][j];
      ++counts[labels[i]];
    }
    std::vector<std::vector<double>> updated(k);
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        empty.push_back(c);
        updated[c] = centroids[c];
        continue;
      }
      updated[c] = std::move(sums[c]);
      for (double& v : updated[c]) v /= static_cast<double>(counts[c]);
    }
    if (!empty.empty()) {
      std::vector<double> far(n);
      for (std::size_t i = 0; i < n; ++i) far[i] = detail::squared_distance(rows[i], updated[labels[i]].data(), dim);
      for (std::size_t c : empty) {
        const auto it = std::max_element(far.begin(), far.end());
        if (*it <= 0.0) break;  // fewer distinct points than clusters
        const auto i = static_cast<std::size_t>(it - far.begin());
        updated[c].assign(rows[i], rows[i] + dim);
        far[i] = 0.0;
      }
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c)
      movement = std::max(movement, std::sqrt(detail::squared_distance(updated[c].data(), centroids[c].data(), dim)));
    centroids = std::move(updated);
    ++iterations;

    previous = labels;
    assign();
    if (labels == previous || movement < options.tol) break;
  }

  dict.iterations = iterations;
  dict.inertia = dict.inertia_history.back();
  dict.words.reserve(k);
  for (const auto& c : centroids) dict.words.emplace_back(c.begin(), c.end());
  return dict;
}

/// Merges the training feature sets and clusters them into k visual words.
inline Dictionary build_dictionary(std::span<const FeatureSet> feature_sets, std::size_t k, std::uint64_t seed,
                                   const KMeansOptions& options = {}) {
  if (feature_sets.empty()) throw InvalidArgument("build_dictionary: no feature sets");
  const DescriptorKind kind = feature_sets.front().kind;
  std::vector<const float*> rows;
  for (const auto& set : feature_sets) {
    if (set.kind != kind)
      throw InvalidArgument("build_dictionary: heterogeneous feature kinds (" + std::string(descriptor_name(kind)) +
                            " vs " + std::string(descriptor_name(set.kind)) + ")");
    for (const auto& v : set.vectors) rows.push_back(v.data());
  }
  Dictionary dict = kmeans(rows, descriptor_dimension(kind), k, seed, options);
  dict.kind = kind;
  return dict;
}

inline Dictionary build_dictionary(std::span<const FeatureSet> feature_sets, std::size_t k, std::uint64_t seed,
                                   std::size_t max_iters, double tol) {
  return build_dictionary(feature_sets, k, seed, KMeansOptions{max_iters, tol});
}

}  // namespace semloc
