// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "semloc/features/feature_set.hpp"
#include "semloc/features/pair_feature.hpp"
#include "semloc/features/support.hpp"

namespace semloc {

namespace detail {

/// Simplified PFH of one point: three independent histograms (alpha, phi,
/// theta) over the pairs (p, neighbor), each normalized to sum 1. Empty when
/// p has no usable neighbor.
inline std::vector<double> compute_spfh(const PointCloud& cloud, const KdTree& index, std::uint32_t p,
                                        double radius, std::size_t bins) {
  const auto& normals = cloud.normals();
  std::vector<double> hist(3 * bins, 0.0);
  std::size_t pairs = 0;
  const Eigen::Vector3d pp = cloud[p].vec();
  const Eigen::Vector3d np = normals[p].vec();
  for (const auto& nb : valid_normal_neighbors(cloud, index, cloud[p], radius)) {
    if (nb.index == p || nb.distance == 0.0) continue;
    const PairFeature f = darboux_pair(pp, np, cloud[nb.index].vec(), normals[nb.index].vec());
    hist[alpha_bin(f, bins)] += 1.0;
    hist[bins + phi_bin(f, bins)] += 1.0;
    hist[2 * bins + theta_bin(f, bins)] += 1.0;
    ++pairs;
  }
  if (pairs == 0) return {};
  for (std::size_t s = 0; s < 3; ++s) normalize_l1(hist.data() + s * bins, bins);
  return hist;
}

}  // namespace detail

/// Fast Point Feature Histogram:
///   FPFH(p) = SPFH(p) + 1/k * sum_i SPFH(p_i) / |p - p_i|
/// over the k valid-normal neighbors p_i within `radius`, then each of the
/// three 11-bin sub-histograms is renormalized to sum 1 (33 values).
inline FeatureSet compute_fpfh(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                               double radius = kDefaultPfhRadius, std::size_t bins_per_angle = 11) {
  detail::require_normals(cloud, "compute_fpfh");
  detail::require_radius(radius, "compute_fpfh");
  if (bins_per_angle != 11)
    throw InvalidArgument("compute_fpfh: only 11 bins per angle give the fixed dimension");
  const std::size_t bins = bins_per_angle;
  const auto& normals = cloud.normals();
  const auto anchors = detail::resolve_anchors(index, keypoints, cloud.size());

  // Neighborhoods of every anchor, then the SPFH of each point they touch.
  std::vector<std::vector<Neighbor>> hoods(keypoints.size());
  parallel_for(keypoints.size(), [&](std::size_t k) {
    if (normals[anchors[k]].valid())
      hoods[k] = detail::valid_normal_neighbors(cloud, index, cloud[anchors[k]], radius);
  });
  std::vector<std::int32_t> slot(cloud.size(), -1);
  std::vector<std::uint32_t> needed;
  auto need = [&](std::uint32_t i) {
    if (slot[i] < 0) {
      slot[i] = static_cast<std::int32_t>(needed.size());
      needed.push_back(i);
    }
  };
  for (std::size_t k = 0; k < keypoints.size(); ++k) {
    if (hoods[k].size() < 2) continue;
    need(anchors[k]);
    for (const auto& nb : hoods[k]) need(nb.index);
  }
  std::vector<std::vector<double>> spfh(needed.size());
  parallel_for(needed.size(), [&](std::size_t s) {
    spfh[s] = detail::compute_spfh(cloud, index, needed[s], radius, bins);
  });

  std::vector<std::vector<float>> results(keypoints.size());
  parallel_for(keypoints.size(), [&](std::size_t k) {
    if (hoods[k].size() < 2) return;
    const std::uint32_t p = anchors[k];
    const auto& own = spfh[static_cast<std::size_t>(slot[p])];
    if (own.empty()) return;
    std::vector<double> sum(3 * bins, 0.0);
    std::size_t count = 0;
    for (const auto& nb : hoods[k]) {
      if (nb.index == p || nb.distance == 0.0) continue;
      ++count;
      const auto& other = spfh[static_cast<std::size_t>(slot[nb.index])];
      if (other.empty()) continue;
      const double w = 1.0 / nb.distance;
      for (std::size_t b = 0; b < sum.size(); ++b) sum[b] += w * other[b];
    }
    std::vector<double> hist = own;
    if (count > 0)
      for (std::size_t b = 0; b < hist.size(); ++b) hist[b] += sum[b] / static_cast<double>(count);
    for (std::size_t s = 0; s < 3; ++s) detail::normalize_l1(hist.data() + s * bins, bins);
    results[k] = detail::to_float(hist);
  });

  FeatureSet out(DescriptorKind::fpfh);
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].empty())
      ++out.dropped;
    else
      out.add(static_cast<std::uint32_t>(k), std::move(results[k]));
  }
  return out;
}

}  // namespace semloc
