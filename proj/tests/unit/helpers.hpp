// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include <Eigen/Geometry>

#include "semloc/semloc.hpp"

namespace semloc::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("semloc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline PointCloud random_cloud(std::size_t n, std::uint64_t seed, bool color = false, double extent = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.f, static_cast<float>(extent));
  std::uniform_int_distribution<int> c(0, 255);
  PointCloud cloud({}, color);
  for (std::size_t i = 0; i < n; ++i) {
    Point3 p(u(rng), u(rng), u(rng));
    if (color) p.color = Rgb{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)),
                             static_cast<std::uint8_t>(c(rng))};
    cloud.push_back(p);
  }
  return cloud;
}

/// Regular grid on z = 0 with the viewpoint above it.
inline PointCloud plane_grid(int nx, int ny, double spacing, bool color = false) {
  PointCloud cloud({}, color);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      cloud.push_back(Point3(static_cast<float>(i * spacing), static_cast<float>(j * spacing), 0.f, Rgb{90, 140, 200}));
  cloud.set_viewpoint(Point3(static_cast<float>(nx * spacing / 2), static_cast<float>(ny * spacing / 2), 1.f));
  return cloud;
}

/// Smooth non-planar height field z = a x^2 + b y^2 + c xy sampled on a grid
/// centered at the origin.
inline PointCloud curved_patch(int half, double spacing) {
  PointCloud cloud;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      const double x = i * spacing, y = j * spacing;
      cloud.push_back(Point3::from({x, y, 2.0 * x * x - 1.2 * y * y + 1.5 * x * y + 0.6 * x * x * x}));
    }
  cloud.set_viewpoint(Point3(0.f, 0.f, 1.f));
  return cloud;
}

inline Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// curved_patch snapped to a 2^-20 m lattice: rotations that permute and negate
/// axes, plus dyadic translations, then move it without any rounding.
inline PointCloud dyadic_patch(int half, double spacing) {
  PointCloud c = curved_patch(half, spacing);
  auto snap = [](float v) { return static_cast<float>(std::ldexp(std::round(std::ldexp(double(v), 20)), -20)); };
  for (auto& p : c.points()) p = Point3(snap(p.x), snap(p.y), snap(p.z));
  return c;
}

/// A few proper rotations built from signed axis permutations.
inline std::vector<Eigen::Matrix3d> axis_rotations() {
  Eigen::Matrix3d a, b, c;
  a << 0, -1, 0, 0, 0, 1, -1, 0, 0;
  b << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  c << -1, 0, 0, 0, -1, 0, 0, 0, 1;
  return {a, b, c};
}

/// Keypoints taken directly from cloud indices.
inline KeypointSet keypoints_at(const PointCloud& cloud, const std::vector<std::int64_t>& indices) {
  KeypointSet k;
  k.detector = "manual";
  for (auto i : indices) {
    k.points.push_back(cloud[static_cast<std::size_t>(i)]);
    k.source_indices.push_back(i);
  }
  return k;
}

struct DescriptorDiff {
  bool same_keypoints = false;
  double max_abs = 0.0;
  std::size_t descriptors = 0;
  std::size_t over_tol = 0;  ///< descriptors with any bin off by more than tol
};

inline DescriptorDiff compare_sets(const FeatureSet& a, const FeatureSet& b, double tol) {
  DescriptorDiff d;
  d.same_keypoints = a.keypoint_ids == b.keypoint_ids;
  if (!d.same_keypoints) return d;
  d.descriptors = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.vectors[i].size(); ++j)
      worst = std::max(worst, static_cast<double>(std::abs(a.vectors[i][j] - b.vectors[i][j])));
    d.max_abs = std::max(d.max_abs, worst);
    d.over_tol += worst > tol;
  }
  return d;
}

// Radii kept off multiples of the patch spacing so no neighbor sits exactly on
// a search sphere or a SHOT shell boundary.
constexpr double kInvNormalRadius = 0.0213;
constexpr double kInvPfhRadius = 0.0317;
constexpr double kInvShotRadius = 0.0517;

/// PFH, FPFH and SHOT at the given keypoints of a cloud without normals.
inline std::vector<FeatureSet> invariance_descriptors(const PointCloud& raw, const std::vector<std::int64_t>& ids) {
  const PointCloud c = estimate_normals(raw, kInvNormalRadius);
  const KdTree index(c);
  const KeypointSet k = keypoints_at(c, ids);
  return {compute_pfh(c, index, k, kInvPfhRadius), compute_fpfh(c, index, k, kInvPfhRadius),
          compute_shot(c, index, k, kInvShotRadius)};
}

/// Grid indices of a stride-spaced block around the center of a patch.
inline std::vector<std::int64_t> patch_center_indices(int half, int stride) {
  const int side = 2 * half + 1;
  std::vector<std::int64_t> out;
  for (int i = -half / 2; i <= half / 2; i += stride)
    for (int j = -half / 2; j <= half / 2; j += stride) out.push_back((i + half) * side + (j + half));
  return out;
}

inline double sum_of(const std::vector<float>& v, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += v[i];
  return s;
}

}  // namespace semloc::testing
