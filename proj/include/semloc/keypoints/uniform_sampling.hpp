// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <tuple>

#include "semloc/keypoints/keypoint_set.hpp"

namespace semloc {

constexpr double kDefaultUniformSamplingRadius = 0.03;

/// Voxel-grid centroid sampling. The grid has edge `radius` and is anchored at
/// the cloud's minimum corner, so the result depends on the cloud's extent and
/// is not translation invariant. Keypoints come out in (ix, iy, iz) voxel order;
/// colors are averaged per channel and rounded.
inline KeypointSet uniform_sampling(const PointCloud& cloud, double radius = kDefaultUniformSamplingRadius) {
  if (!(radius > 0.0)) throw InvalidArgument("uniform_sampling: radius must be positive");
  if (cloud.empty()) throw InvalidArgument("uniform_sampling: cloud is empty");

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  for (const auto& p : cloud.points())
    if (p.finite()) lo = lo.cwiseMin(p.vec());

  struct Accumulator {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    double r = 0, g = 0, b = 0;
    std::size_t n = 0;
  };
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Accumulator> voxels;
  for (const auto& p : cloud.points()) {
    if (!p.finite()) continue;
    const Eigen::Vector3d rel = (p.vec() - lo) / radius;
    auto key = std::make_tuple(static_cast<std::int64_t>(std::floor(rel.x())),
                               static_cast<std::int64_t>(std::floor(rel.y())),
                               static_cast<std::int64_t>(std::floor(rel.z())));
    auto& acc = voxels[key];
    acc.sum += p.vec();
    acc.r += p.color.r;
    acc.g += p.color.g;
    acc.b += p.color.b;
    ++acc.n;
  }

  KeypointSet out;
  out.detector = "uniform_sampling";
  out.parameters["radius"] = radius;
  out.points.reserve(voxels.size());
  for (const auto& [key, acc] : voxels) {
    const double n = static_cast<double>(acc.n);
    Point3 kp = Point3::from(acc.sum / n);
    if (cloud.has_color())
      kp.color = {static_cast<std::uint8_t>(std::lround(acc.r / n)), static_cast<std::uint8_t>(std::lround(acc.g / n)),
                  static_cast<std::uint8_t>(std::lround(acc.b / n))};
    out.points.push_back(kp);
    out.source_indices.push_back(kSynthesized);
  }
  return out;
}

}  // namespace semloc
