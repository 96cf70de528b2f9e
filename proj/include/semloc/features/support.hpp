// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "semloc/cloud/kdtree.hpp"
#include "semloc/keypoints/keypoint_set.hpp"

namespace semloc {

/// Default support radii for local descriptors.
constexpr double kDefaultPfhRadius = 0.06;
constexpr double kDefaultShotRadius = 0.10;

namespace detail {

/// Cloud point that represents each keypoint during description: the source
/// point itself, or for synthesized keypoints the nearest cloud point.
inline std::vector<std::uint32_t> resolve_anchors(const KdTree& index, const KeypointSet& keypoints,
                                                  std::size_t cloud_size) {
  std::vector<std::uint32_t> anchors(keypoints.size());
  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    const std::int64_t src = i < keypoints.source_indices.size() ? keypoints.source_indices[i] : kSynthesized;
    if (src >= 0) {
      if (static_cast<std::size_t>(src) >= cloud_size)
        throw InvalidArgument("keypoint source index out of range");
      anchors[i] = static_cast<std::uint32_t>(src);
    } else {
      anchors[i] = index.knn(keypoints.points[i], 1).front().index;
    }
  }
  return anchors;
}

/// Neighbors within radius of `center` whose normals are valid.
inline std::vector<Neighbor> valid_normal_neighbors(const PointCloud& cloud, const KdTree& index,
                                                    const Point3& center, double radius) {
  auto nbs = index.radius_search(center, radius);
  const auto& normals = cloud.normals();
  std::erase_if(nbs, [&](const Neighbor& nb) { return !normals[nb.index].valid(); });
  return nbs;
}

inline void require_normals(const PointCloud& cloud, const char* who) {
  if (!cloud.has_normals()) throw InvalidArgument(std::string(who) + ": cloud has no normals");
}

inline void require_color(const PointCloud& cloud, const char* who) {
  if (!cloud.has_color()) throw InvalidArgument(std::string(who) + ": cloud has no color");
}

inline void require_radius(double radius, const char* who) {
  if (!(radius > 0.0)) throw InvalidArgument(std::string(who) + ": radius must be positive");
}

template <typename T>
void normalize_l1(T* values, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += values[i];
  if (sum <= 0.0) return;
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<T>(values[i] / sum);
}

template <typename T>
void normalize_l2(T* values, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(values[i]) * values[i];
  if (sum <= 0.0) return;
  const double inv = 1.0 / std::sqrt(sum);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<T>(values[i] * inv);
}

inline std::vector<float> to_float(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace detail
}  // namespace semloc
