// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semloc/cloud/point_cloud.hpp"

namespace semloc {

/// Sentinel source index for keypoints that are not cloud points (voxel centroids).
constexpr std::int64_t kSynthesized = -1;

struct KeypointSet {
  std::vector<Point3> points;
  /// Parallel to points; kSynthesized for centroids.
  std::vector<std::int64_t> source_indices;
  /// Detector response per keypoint (empty for detectors without one).
  std::vector<double> responses;
  std::string detector;
  std::map<std::string, double> parameters;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

}  // namespace semloc
