// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Eigenvalues>

#include "semloc/cloud/kdtree.hpp"

namespace semloc {

/// Minimum neighborhood size (query point included) for a defined normal.
constexpr std::size_t kMinNormalNeighbors = 3;

struct PlaneFit {
  bool valid = false;
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  double curvature = 0.0;
};

/// PCA plane fit: normal is the eigenvector of the smallest covariance
/// eigenvalue, curvature = l0 / (l0 + l1 + l2). A neighborhood whose two
/// smallest eigenvalues vanish (coincident or collinear points) has no
/// defined normal.
inline PlaneFit fit_plane(const PointCloud& cloud, const std::vector<Neighbor>& neighbors) {
  PlaneFit fit;
  if (neighbors.size() < kMinNormalNeighbors) return fit;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& nb : neighbors) mean += cloud[nb.index].vec();
  mean /= static_cast<double>(neighbors.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& nb : neighbors) {
    const Eigen::Vector3d d = cloud[nb.index].vec() - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(neighbors.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d ev = solver.eigenvalues().cwiseMax(0.0);
  const double sum = ev.sum();
  if (!(sum > 0.0) || ev(1) <= 1e-12 * ev(2)) return fit;
  fit.valid = true;
  fit.normal = solver.eigenvectors().col(0).normalized();
  fit.curvature = ev(0) / sum;
  return fit;
}

/// Radius-based normal estimation with viewpoint sign disambiguation.
/// Points with fewer than three neighbors (or a degenerate neighborhood)
/// get Normal3::invalid().
inline PointCloud estimate_normals(const PointCloud& cloud, const KdTree& index, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("estimate_normals: radius must be positive");
  std::vector<Normal3> normals(cloud.size());
  const Eigen::Vector3d viewpoint = cloud.viewpoint().vec();
  parallel_for(cloud.size(), [&](std::size_t i) {
    if (!cloud[i].finite()) return;
    const auto neighbors = index.radius_search(cloud[i], radius);
    const PlaneFit fit = fit_plane(cloud, neighbors);
    if (!fit.valid) return;
    Eigen::Vector3d n = fit.normal;
    if (n.dot(viewpoint - cloud[i].vec()) < 0.0) n = -n;
    normals[i].nx = static_cast<float>(n.x());
    normals[i].ny = static_cast<float>(n.y());
    normals[i].nz = static_cast<float>(n.z());
    normals[i].curvature = static_cast<float>(fit.curvature);
  });
  PointCloud out = cloud;
  out.set_normals(std::move(normals));
  return out;
}

inline PointCloud estimate_normals(const PointCloud& cloud, double radius) {
  return estimate_normals(cloud, KdTree(cloud), radius);
}

}  // namespace semloc
