// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "semloc/common.hpp"

namespace semloc {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 3D point in meters. Color is meaningful only when the owning cloud has_color().
struct Point3 {
  float x = 0.f, y = 0.f, z = 0.f;
  Rgb color{};

  Point3() = default;
  Point3(float x_, float y_, float z_) : x(x_), y(y_), z(z_) {}
  Point3(float x_, float y_, float z_, Rgb c) : x(x_), y(y_), z(z_), color(c) {}

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  Eigen::Vector3d vec() const { return {x, y, z}; }

  static Point3 from(const Eigen::Vector3d& v) {
    return {static_cast<float>(v.x()), static_cast<float>(v.y()), static_cast<float>(v.z())};
  }
};

/// Unit surface normal with curvature. An invalid normal has NaN components.
struct Normal3 {
  float nx = NAN, ny = NAN, nz = NAN;
  float curvature = NAN;

  bool valid() const { return std::isfinite(nx) && std::isfinite(ny) && std::isfinite(nz); }
  Eigen::Vector3d vec() const { return {nx, ny, nz}; }

  static Normal3 invalid() { return {}; }
};

/// A perception: points, optional parallel normals, sensor origin and room label.
class PointCloud {
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points, bool has_color = false)
      : points_(std::move(points)), has_color_(has_color) {}

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const std::vector<Point3>& points() const { return points_; }
  std::vector<Point3>& points() { return points_; }
  const Point3& operator[](std::size_t i) const { return points_[i]; }
  Point3& operator[](std::size_t i) { return points_[i]; }

  void push_back(const Point3& p) {
    if (has_normals()) throw InvalidArgument("push_back on a cloud with normals");
    points_.push_back(p);
  }

  bool has_color() const { return has_color_; }
  void set_has_color(bool v) { has_color_ = v; }

  bool has_normals() const { return normals_set_; }
  const std::vector<Normal3>& normals() const { return normals_; }

  void set_normals(std::vector<Normal3> normals) {
    if (normals.size() != points_.size())
      throw InvalidArgument("normals length " + std::to_string(normals.size()) +
                            " does not match point count " + std::to_string(points_.size()));
    normals_ = std::move(normals);
    normals_set_ = true;
  }
  void clear_normals() {
    normals_.clear();
    normals_set_ = false;
  }

  const Point3& viewpoint() const { return viewpoint_; }
  void set_viewpoint(const Point3& v) { viewpoint_ = v; }

  const std::optional<std::string>& label() const { return label_; }
  void set_label(std::optional<std::string> l) { label_ = std::move(l); }

  std::size_t count_valid_normals() const {
    std::size_t n = 0;
    for (const auto& nm : normals_) n += nm.valid() ? 1 : 0;
    return n;
  }

private:
  std::vector<Point3> points_;
  std::vector<Normal3> normals_;
  bool normals_set_ = false;
  bool has_color_ = false;
  Point3 viewpoint_{};
  std::optional<std::string> label_;
};

/// Removes non-finite points (and their normals). Returns the number dropped.
inline std::size_t remove_invalid_points(PointCloud& cloud) {
  std::vector<Point3> kept;
  std::vector<Normal3> kept_normals;
  const bool with_normals = cloud.has_normals();
  kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!cloud[i].finite()) continue;
    kept.push_back(cloud[i]);
    if (with_normals) kept_normals.push_back(cloud.normals()[i]);
  }
  const std::size_t dropped = cloud.size() - kept.size();
  cloud.clear_normals();
  cloud.points() = std::move(kept);
  if (with_normals) cloud.set_normals(std::move(kept_normals));
  return dropped;
}

/// Applies x -> R x + t to points, normals (rotation only) and the viewpoint.
inline PointCloud transformed(const PointCloud& cloud, const Eigen::Matrix3d& rotation,
                              const Eigen::Vector3d& translation) {
  PointCloud out = cloud;
  out.clear_normals();
  for (auto& p : out.points()) {
    const Rgb c = p.color;
    p = Point3::from(rotation * p.vec() + translation);
    p.color = c;
  }
  if (cloud.has_normals()) {
    std::vector<Normal3> normals = cloud.normals();
    for (auto& n : normals) {
      if (!n.valid()) continue;
      const Eigen::Vector3d r = rotation * n.vec();
      n.nx = static_cast<float>(r.x());
      n.ny = static_cast<float>(r.y());
      n.nz = static_cast<float>(r.z());
    }
    out.set_normals(std::move(normals));
  }
  Point3 vp = Point3::from(rotation * cloud.viewpoint().vec() + translation);
  out.set_viewpoint(vp);
  return out;
}

}  // namespace semloc
