// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "semloc/cloud/point_cloud.hpp"
#include "semloc/features/feature_set.hpp"
#include "semloc/features/pair_feature.hpp"
#include "semloc/features/support.hpp"

namespace semloc {

struct EsfConfig {
  std::size_t samples = 20000;
  std::size_t voxel_resolution = 64;
  std::uint64_t seed = 1;
};

namespace detail {

constexpr std::size_t kEsfBins = 64;

enum class LineClass { in = 0, out = 1, mixed = 2 };

class OccupancyGrid {
public:
  OccupancyGrid(const std::vector<Eigen::Vector3d>& pts, std::size_t res) : res_(res) {
    lo_ = hi_ = pts.front();
    for (const auto& p : pts) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    extent_ = hi_ - lo_;
    cells_.assign(res * res * res, 0);
    for (const auto& p : pts) cells_[flat(cell_of(p))] = 1;
  }

  double diagonal() const { return extent_.norm(); }

  /// Fraction of occupied voxels among interior samples of the segment a-b,
  /// one sample per voxel step. Segments spanning at most one voxel step have
  /// no interior and count as fully occupied.
  double occupied_fraction(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const {
    const auto ca = cell_of(a), cb = cell_of(b);
    long steps = 0;
    for (int i = 0; i < 3; ++i) steps = std::max(steps, std::labs(ca[i] - cb[i]));
    if (steps <= 1) return 1.0;
    std::size_t occupied = 0;
    for (long s = 1; s < steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      occupied += cells_[flat(cell_of(a + t * (b - a)))];
    }
    return static_cast<double>(occupied) / static_cast<double>(steps - 1);
  }

private:
  std::array<long, 3> cell_of(const Eigen::Vector3d& p) const {
    std::array<long, 3> c{};
    for (int i = 0; i < 3; ++i) {
      if (extent_[i] <= 0.0) continue;
      const double t = (p[i] - lo_[i]) / extent_[i] * static_cast<double>(res_);
      c[static_cast<std::size_t>(i)] =
          std::clamp(static_cast<long>(std::floor(t)), 0L, static_cast<long>(res_) - 1);
    }
    return c;
  }
  std::size_t flat(const std::array<long, 3>& c) const {
    return (static_cast<std::size_t>(c[0]) * res_ + static_cast<std::size_t>(c[1])) * res_ +
           static_cast<std::size_t>(c[2]);
  }

  std::size_t res_;
  Eigen::Vector3d lo_, hi_, extent_;
  std::vector<std::uint8_t> cells_;
};

inline LineClass classify_line(double fraction) {
  if (fraction >= 1.0) return LineClass::in;
  if (fraction <= 0.0) return LineClass::out;
  return LineClass::mixed;
}

}  // namespace detail

/// Ensemble of Shape Functions global descriptor (10 x 64 = 640 values).
///
/// Random point triples are drawn from the cloud; every segment of a triple is
/// classified in / out / mixed against a voxel occupancy grid over the
/// bounding box. Sub-histograms, in order: D2 (in, out, mixed), occupied
/// fraction of each segment, A3 angle (in, out, mixed; classified by the
/// opposite segment), D3 = sqrt(area) (in, out, mixed; all three segments
/// decide). Lengths are scaled by the bounding-box diagonal, so the
/// descriptor is scale invariant. Each non-empty sub-histogram sums to 1; a
/// class that never occurs leaves its sub-histogram all zero.
inline FeatureVector compute_esf(const PointCloud& cloud, const EsfConfig& config = {}) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(cloud.size());
  for (const auto& p : cloud.points())
    if (p.finite()) pts.push_back(p.vec());
  if (pts.size() < 3) throw InvalidArgument("compute_esf: need at least 3 points");
  if (config.voxel_resolution < 1) throw InvalidArgument("compute_esf: voxel resolution must be >= 1");
  const detail::OccupancyGrid grid(pts, config.voxel_resolution);
  const double diag = grid.diagonal();
  if (!(diag > 0.0)) throw InvalidArgument("compute_esf: all points coincide");
  const double max_root_area = diag * std::sqrt(std::sqrt(3.0) / 4.0);

  constexpr std::size_t B = detail::kEsfBins;
  std::vector<double> h(10 * B, 0.0);
  auto add = [&](std::size_t sub, double value, double lo, double hi) {
    h[sub * B + detail::bin_of(value, lo, hi, B)] += 1.0;
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t s = 0; s < config.samples; ++s) {
    std::size_t ia = pick(rng), ib = pick(rng), ic = pick(rng);
    while (ib == ia) ib = pick(rng);
    while (ic == ia || ic == ib) ic = pick(rng);
    const Eigen::Vector3d& a = pts[ia];
    const Eigen::Vector3d& b = pts[ib];
    const Eigen::Vector3d& c = pts[ic];

    const std::array<std::pair<const Eigen::Vector3d*, const Eigen::Vector3d*>, 3> segments{
        {{&a, &b}, {&b, &c}, {&c, &a}}};
    std::array<detail::LineClass, 3> cls{};
    for (std::size_t e = 0; e < 3; ++e) {
      const auto& [p, q] = segments[e];
      const double frac = grid.occupied_fraction(*p, *q);
      cls[e] = detail::classify_line(frac);
      add(static_cast<std::size_t>(cls[e]), (*p - *q).norm() / diag, 0.0, 1.0);
      add(3, frac, 0.0, 1.0);
    }

    const Eigen::Vector3d ab = b - a, ac = c - a;
    if (ab.norm() > 0.0 && ac.norm() > 0.0) {
      const double cosang = std::clamp(ab.dot(ac) / (ab.norm() * ac.norm()), -1.0, 1.0);
      add(4 + static_cast<std::size_t>(cls[1]), std::acos(cosang), 0.0, M_PI);
    }

    const double area = 0.5 * ab.cross(ac).norm();
    detail::LineClass tri = detail::LineClass::mixed;
    if (cls[0] == cls[1] && cls[1] == cls[2] && cls[0] != detail::LineClass::mixed) tri = cls[0];
    add(7 + static_cast<std::size_t>(tri), std::sqrt(area) / max_root_area, 0.0, 1.0);
  }
  for (std::size_t sub = 0; sub < 10; ++sub) detail::normalize_l1(h.data() + sub * B, B);
  return {DescriptorKind::esf, detail::to_float(h)};
}

}  // namespace semloc
