// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include <Eigen/Eigenvalues>

#include "semloc/features/feature_set.hpp"
#include "semloc/features/support.hpp"

namespace semloc {

/// Local reference frame; rows are the x, y, z axes.
using LocalFrame = Eigen::Matrix3d;

/// Distance-weighted covariance frame around `center` (weights radius - d).
/// x is the dominant eigenvector, z the weakest, y = z cross x. Each of x and z
/// is flipped so that most neighbor displacements project non-negatively;
/// an x tie falls back to the sign of the summed projections, a z tie points
/// z toward the viewpoint. Returns nullopt for collinear or too-small supports.
inline std::optional<LocalFrame> shot_reference_frame(const PointCloud& cloud, const std::vector<Neighbor>& support,
                                                      const Eigen::Vector3d& center, double radius) {
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double wsum = 0.0;
  std::size_t used = 0;
  for (const auto& nb : support) {
    const double w = radius - nb.distance;
    if (w <= 0.0 || nb.distance == 0.0) continue;
    const Eigen::Vector3d d = cloud[nb.index].vec() - center;
    cov += w * d * d.transpose();
    wsum += w;
    ++used;
  }
  if (used < 3 || wsum <= 0.0) return std::nullopt;
  cov /= wsum;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d ev = solver.eigenvalues();
  if (!(ev(2) > 0.0) || ev(1) <= 1e-10 * ev(2)) return std::nullopt;
  Eigen::Vector3d x = solver.eigenvectors().col(2);
  Eigen::Vector3d z = solver.eigenvectors().col(0);

  auto vote = [&](const Eigen::Vector3d& axis) {
    // Projections within this band count as neither side.
    const double eps = 1e-9 * radius;
    long balance = 0;
    double sum = 0.0;
    for (const auto& nb : support) {
      if (nb.distance == 0.0 || nb.distance >= radius) continue;
      const double proj = (cloud[nb.index].vec() - center).dot(axis);
      balance += proj > eps ? 1 : (proj < -eps ? -1 : 0);
      sum += proj;
    }
    return std::pair{balance, sum};
  };
  if (auto [balance, sum] = vote(x); balance < 0 || (balance == 0 && sum < 0.0)) x = -x;
  if (auto [balance, sum] = vote(z); balance < 0) {
    z = -z;
  } else if (balance == 0 && z.dot(cloud.viewpoint().vec() - center) < 0.0) {
    z = -z;
  }
  LocalFrame frame;
  frame.row(0) = x.transpose();
  frame.row(1) = z.cross(x).transpose();
  frame.row(2) = z.transpose();
  return frame;
}

namespace detail {

constexpr std::size_t kShotSectors = 32;  // 8 azimuth x 2 elevation x 2 shells
constexpr std::size_t kShotCosineBins = 11;
constexpr std::size_t kShotColorBins = 31;

inline std::size_t shot_sector(const Eigen::Vector3d& local, double distance, double radius) {
  const std::size_t azimuth = bin_of(std::atan2(local.y(), local.x()), -M_PI, M_PI, 8);
  const std::size_t elevation = local.z() >= 0.0 ? 1 : 0;
  const std::size_t shell = distance > 0.5 * radius ? 1 : 0;
  return azimuth + 8 * (elevation + 2 * shell);
}

inline FeatureSet shot_family(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                              double radius, std::size_t cosine_bins, bool with_color) {
  const DescriptorKind kind = with_color ? DescriptorKind::cshot : DescriptorKind::shot;
  const char* who = with_color ? "compute_cshot" : "compute_shot";
  require_normals(cloud, who);
  if (with_color) require_color(cloud, who);
  require_radius(radius, who);
  if (cosine_bins != kShotCosineBins)
    throw InvalidArgument(std::string(who) + ": only 11 cosine bins give the fixed dimension");

  const std::size_t shape_len = kShotSectors * kShotCosineBins;
  const std::size_t color_len = kShotSectors * kShotColorBins;
  const auto anchors = resolve_anchors(index, keypoints, cloud.size());
  const auto& normals = cloud.normals();
  std::vector<std::vector<float>> results(keypoints.size());

  parallel_for(keypoints.size(), [&](std::size_t k) {
    const std::uint32_t anchor = anchors[k];
    if (!normals[anchor].valid()) return;
    const Eigen::Vector3d center = cloud[anchor].vec();
    const Eigen::Vector3d center_normal = normals[anchor].vec();
    const Rgb center_color = cloud[anchor].color;
    const auto support = index.radius_search(cloud[anchor], radius);
    const auto frame = shot_reference_frame(cloud, support, center, radius);
    if (!frame) return;

    std::vector<double> hist(with_color ? shape_len + color_len : shape_len, 0.0);
    std::size_t hits = 0;
    for (const auto& nb : support) {
      if (nb.distance == 0.0 || !normals[nb.index].valid()) continue;
      const Eigen::Vector3d local = *frame * (cloud[nb.index].vec() - center);
      const std::size_t sector = shot_sector(local, nb.distance, radius);
      const double cosine = std::clamp(normals[nb.index].vec().dot(center_normal), -1.0, 1.0);
      hist[sector * kShotCosineBins + bin_of(cosine, -1.0, 1.0, kShotCosineBins)] += 1.0;
      if (with_color) {
        const Rgb& c = cloud[nb.index].color;
        const double diff = (std::abs(int{c.r} - int{center_color.r}) + std::abs(int{c.g} - int{center_color.g}) +
                             std::abs(int{c.b} - int{center_color.b})) /
                            (3.0 * 255.0);
        hist[shape_len + sector * kShotColorBins + bin_of(diff, 0.0, 1.0, kShotColorBins)] += 1.0;
      }
      ++hits;
    }
    if (hits == 0) return;
    normalize_l2(hist.data(), shape_len);
    if (with_color) normalize_l2(hist.data() + shape_len, color_len);
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

/// SHOT: 32 sectors of the support sphere (8 azimuth, 2 elevation, 2 radial
/// shells in the local frame), each an 11-bin histogram of the cosine between
/// neighbor and keypoint normals. Nearest-bin assignment, no interpolation.
/// L2-normalized, 352 values.
inline FeatureSet compute_shot(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                               double radius = kDefaultShotRadius, std::size_t cosine_bins = 11) {
  return detail::shot_family(cloud, index, keypoints, radius, cosine_bins, false);
}

/// SHOT followed by 32 sectors x 31 bins of the normalized L1 RGB difference
/// to the keypoint color. Each half is L2-normalized separately (1344 values).
inline FeatureSet compute_cshot(const PointCloud& cloud, const KdTree& index, const KeypointSet& keypoints,
                                double radius = kDefaultShotRadius) {
  return detail::shot_family(cloud, index, keypoints, radius, detail::kShotCosineBins, true);
}

}  // namespace semloc
