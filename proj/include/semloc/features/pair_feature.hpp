// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "semloc/common.hpp"

namespace semloc {

/// Darboux-frame relation between two oriented points.
struct PairFeature {
  double alpha = 0.0;  ///< v . n_t
  double phi = 0.0;    ///< u . (p_t - p_s) / d
  double theta = 0.0;  ///< atan2(w . n_t, u . n_t), in (-pi, pi]
  double d = 0.0;      ///< |p_t - p_s|
  bool swapped = false;  ///< true when the second argument was chosen as source
};

/// Computes the pair feature, taking as source the point whose normal makes
/// the smaller angle with the connecting line. Exact ties pick the
/// lexicographically smaller point so the result is independent of argument
/// order. The frame is u = n_s, v = unit(dir x u), w = u x v; when dir is
/// parallel to n_s the frame is undefined and alpha = theta = 0.
inline PairFeature darboux_pair(const Eigen::Vector3d& p1, const Eigen::Vector3d& n1, const Eigen::Vector3d& p2,
                                const Eigen::Vector3d& n2) {
  const Eigen::Vector3d delta = p2 - p1;
  const double d = delta.norm();
  if (!(d > 0.0)) throw InvalidArgument("darboux_pair: coincident points");
  const Eigen::Vector3d dir = delta / d;
  const double c1 = std::abs(n1.dot(dir));
  const double c2 = std::abs(n2.dot(dir));
  bool swap = c2 > c1;
  if (c1 == c2) swap = std::lexicographical_compare(p2.data(), p2.data() + 3, p1.data(), p1.data() + 3);

  const Eigen::Vector3d& ns = swap ? n2 : n1;
  const Eigen::Vector3d& nt = swap ? n1 : n2;
  const Eigen::Vector3d line = swap ? Eigen::Vector3d(-dir) : dir;

  PairFeature f;
  f.d = d;
  f.swapped = swap;
  f.phi = std::clamp(ns.dot(line), -1.0, 1.0);
  const Eigen::Vector3d v_raw = line.cross(ns);
  const double v_norm = v_raw.norm();
  if (v_norm < 1e-12) return f;
  const Eigen::Vector3d v = v_raw / v_norm;
  const Eigen::Vector3d w = ns.cross(v);
  f.alpha = std::clamp(v.dot(nt), -1.0, 1.0);
  f.theta = std::atan2(w.dot(nt), ns.dot(nt));
  if (f.theta == -M_PI) f.theta = M_PI;
  return f;
}

namespace detail {

/// Maps value in [lo, hi] onto [0, bins), clamping the upper edge into the last bin.
inline std::size_t bin_of(double value, double lo, double hi, std::size_t bins) {
  const double t = (value - lo) / (hi - lo) * static_cast<double>(bins);
  if (!(t > 0.0)) return 0;
  return std::min(bins - 1, static_cast<std::size_t>(t));
}

inline std::size_t alpha_bin(const PairFeature& f, std::size_t bins) { return bin_of(f.alpha, -1.0, 1.0, bins); }
inline std::size_t phi_bin(const PairFeature& f, std::size_t bins) { return bin_of(f.phi, -1.0, 1.0, bins); }
inline std::size_t theta_bin(const PairFeature& f, std::size_t bins) {
  return bin_of(f.theta, -M_PI, M_PI, bins);
}

}  // namespace detail

}  // namespace semloc
