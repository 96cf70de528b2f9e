// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <numeric>

#include "semloc/cloud/kdtree.hpp"
#include "semloc/keypoints/keypoint_set.hpp"

namespace semloc {

struct HarrisConfig {
  double support_radius = 0.05;
  double response_constant = 0.04;
  /// Fraction of the per-cloud maximum response below which points are discarded.
  double threshold = 0.01;
  double nms_radius = 0.05;

  void validate() const {
    if (!(support_radius > 0.0) || !(nms_radius > 0.0))
      throw InvalidArgument("harris3d: radii must be positive");
    if (!(threshold >= 0.0)) throw InvalidArgument("harris3d: threshold must be >= 0");
    if (!std::isfinite(response_constant)) throw InvalidArgument("harris3d: response constant must be finite");
  }
};

/// Harris response k + det(C) - k tr(C)^2, where C is the (uncentered) mean of
/// n n^T over the valid normals within support_radius of each point. For unit
/// normals tr(C) = 1, so the response is det(C): zero on planes and edges,
/// positive where normals spread in three directions. NaN where the point has
/// no valid normal.
inline std::vector<double> harris3d_responses(const PointCloud& cloud, const KdTree& index,
                                              const HarrisConfig& config) {
  if (!cloud.has_normals()) throw InvalidArgument("harris3d: cloud has no normals");
  config.validate();
  const auto& normals = cloud.normals();
  std::vector<double> response(cloud.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(cloud.size(), [&](std::size_t i) {
    if (!normals[i].valid() || !cloud[i].finite()) return;
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    std::size_t n = 0;
    for (const auto& nb : index.radius_search(cloud[i], config.support_radius)) {
      const Normal3& nm = normals[nb.index];
      if (!nm.valid()) continue;
      const Eigen::Vector3d v = nm.vec();
      second += v * v.transpose();
      ++n;
    }
    const Eigen::Matrix3d c = second / static_cast<double>(n);
    const double tr = c.trace();
    const double k = config.response_constant;
    response[i] = k + c.determinant() - k * tr * tr;
  });
  return response;
}

/// Harris3D keypoint detector: relative thresholding, then non-maximum
/// suppression keeping points whose response is strictly the largest within
/// nms_radius (equal responses resolve to the lower index). Output is sorted
/// by decreasing response, then index.
inline KeypointSet harris3d(const PointCloud& cloud, const KdTree& index, const HarrisConfig& config = {}) {
  const std::vector<double> response = harris3d_responses(cloud, index, config);

  KeypointSet out;
  out.detector = "harris3d";
  out.parameters = {{"support_radius", config.support_radius},
                    {"response_constant", config.response_constant},
                    {"threshold", config.threshold},
                    {"nms_radius", config.nms_radius}};

  double max_response = 0.0;
  for (double r : response)
    if (std::isfinite(r)) max_response = std::max(max_response, r);
  // Rounding noise on a flat cloud yields responses ~1e-20; treat that as zero.
  constexpr double kResponseFloor = 1e-15;
  if (max_response <= kResponseFloor) return out;
  const double cutoff = std::max(config.threshold * max_response, kResponseFloor);

  auto beats = [&](std::size_t a, std::size_t b) {
    return response[a] > response[b] || (response[a] == response[b] && a < b);
  };

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!std::isfinite(response[i]) || response[i] < cutoff) continue;
    bool is_max = true;
    for (const auto& nb : index.radius_search(cloud[i], config.nms_radius)) {
      if (nb.index == i || !std::isfinite(response[nb.index])) continue;
      if (!beats(i, nb.index)) {
        is_max = false;
        break;
      }
    }
    if (is_max) survivors.push_back(i);
  }
  std::sort(survivors.begin(), survivors.end(), beats);
  for (std::size_t i : survivors) {
    out.points.push_back(cloud[i]);
    out.source_indices.push_back(static_cast<std::int64_t>(i));
    out.responses.push_back(response[i]);
  }
  return out;
}

inline KeypointSet harris3d(const PointCloud& cloud, const HarrisConfig& config = {}) {
  return harris3d(cloud, KdTree(cloud), config);
}

}  // namespace semloc
