// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "semloc/features/feature_set.hpp"
#include "semloc/features/pair_feature.hpp"
#include "semloc/features/support.hpp"

namespace semloc {

namespace detail {

inline double color_ratio(std::uint8_t source, std::uint8_t target) {
  const int sum = int{source} + int{target};
  return sum == 0 ? 0.5 : static_cast<double>(source) / sum;
}

// Shared PFH / PFH-RGB kernel. The geometric joint histogram indexes
// theta + B * alpha + B^2 * phi; d is not binned.
inline FeatureSet pair_histograms(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                                  double radius, std::size_t bins, bool with_color) {
  const DescriptorKind kind = with_color ? DescriptorKind::pfhrgb : DescriptorKind::pfh;
  const char* who = with_color ? "compute_pfhrgb" : "compute_pfh";
  require_normals(cloud, who);
  if (with_color) require_color(cloud, who);
  require_radius(radius, who);
  if (bins != 5) throw InvalidArgument(std::string(who) + ": only 5 bins per angle give the fixed dimension");
  constexpr std::size_t kColorBins = 5;

  const std::size_t half = bins * bins * bins;
  const auto anchors = resolve_anchors(index, keypoints, cloud.size());
  const auto& normals = cloud.normals();
  std::vector<std::vector<float>> results(keypoints.size());

  parallel_for(keypoints.size(), [&](std::size_t k) {
    const std::uint32_t anchor = anchors[k];
    if (!normals[anchor].valid()) return;
    const auto nbs = valid_normal_neighbors(cloud, index, cloud[anchor], radius);
    if (nbs.size() < 2) return;
    std::vector<double> hist(with_color ? 2 * half : half, 0.0);
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < nbs.size(); ++a) {
      const Point3& pa = cloud[nbs[a].index];
      for (std::size_t b = a + 1; b < nbs.size(); ++b) {
        const Point3& pb = cloud[nbs[b].index];
        if (pa.x == pb.x && pa.y == pb.y && pa.z == pb.z) continue;
        const PairFeature f =
            darboux_pair(pa.vec(), normals[nbs[a].index].vec(), pb.vec(), normals[nbs[b].index].vec());
        hist[theta_bin(f, bins) + bins * alpha_bin(f, bins) + bins * bins * phi_bin(f, bins)] += 1.0;
        if (with_color) {
          const Rgb& s = f.swapped ? pb.color : pa.color;
          const Rgb& t = f.swapped ? pa.color : pb.color;
          const std::size_t r = bin_of(color_ratio(s.r, t.r), 0.0, 1.0, kColorBins);
          const std::size_t g = bin_of(color_ratio(s.g, t.g), 0.0, 1.0, kColorBins);
          const std::size_t bl = bin_of(color_ratio(s.b, t.b), 0.0, 1.0, kColorBins);
          hist[half + r + kColorBins * g + kColorBins * kColorBins * bl] += 1.0;
        }
        ++pairs;
      }
    }
    if (pairs == 0) return;
    normalize_l1(hist.data(), half);
    if (with_color) normalize_l1(hist.data() + half, half);
    results[k] = to_float(hist);
  });

  FeatureSet out(kind);
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].empty())
      ++out.dropped;
    else
      out.add(static_cast<std::uint32_t>(k), std::move(results[k]));
  }
  return out;
}

}  // namespace detail

/// Point Feature Histogram: joint 5x5x5 histogram of (alpha, phi, theta) over
/// every unordered pair of valid-normal points within `radius` of the
/// keypoint, normalized to sum 1. Keypoints with fewer than two such points
/// are dropped and counted.
inline FeatureSet compute_pfh(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                              double radius = kDefaultPfhRadius, std::size_t bins_per_angle = 5) {
  return detail::pair_histograms(cloud, index, keypoints, radius, bins_per_angle, false);
}

/// PFH followed by a 5x5x5 joint histogram of per-channel color ratios
/// c_s / (c_s + c_t). Each half sums to 1.
inline FeatureSet compute_pfhrgb(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                                 double radius = kDefaultPfhRadius, std::size_t bins_per_angle = 5) {
  return detail::pair_histograms(cloud, index, keypoints, radius, bins_per_angle, true);
}

}  // namespace semloc
