// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "semloc/cloud/point_cloud.hpp"

namespace semloc {

struct Neighbor {
  std::uint32_t index;  ///< index into the source cloud
  double distance;      ///< Euclidean, meters
};

/// Static kd-tree over the finite points of a cloud.
///
/// Splits on the axis of largest spread at the median. Results are ordered by
/// (distance, source index), so equal distances resolve to the lower index.
/// Immutable after construction; queries are safe to run concurrently.
class KdTree {
public:
  static constexpr std::size_t kLeafSize = 12;

  KdTree() = default;

  explicit KdTree(const PointCloud& cloud) {
    coords_.reserve(cloud.size());
    ids_.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (!cloud[i].finite()) continue;
      coords_.push_back({cloud[i].x, cloud[i].y, cloud[i].z});
      ids_.push_back(static_cast<std::uint32_t>(i));
    }
    if (coords_.empty()) throw InvalidArgument("build_index: cloud has no finite points");
    order_.resize(coords_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(2 * coords_.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(order_.size()));
  }

  std::size_t size() const { return coords_.size(); }

  /// min(k, size()) nearest points sorted by (distance, index).
  std::vector<Neighbor> knn(const Point3& query, std::size_t k) const {
    if (k == 0) throw InvalidArgument("knn_search: k must be >= 1");
    k = std::min(k, coords_.size());
    const std::array<double, 3> q{query.x, query.y, query.z};
    Heap heap;
    knn_recurse(0, q, k, heap);
    std::vector<Neighbor> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      const auto [d2, id] = heap.top();
      heap.pop();
      out[i] = {id, std::sqrt(d2)};
    }
    return out;
  }

  /// All points within `radius` (inclusive) sorted by (distance, index). radius == 0
  /// returns exactly the points that coincide with the query.
  std::vector<Neighbor> radius_search(const Point3& query, double radius) const {
    if (!(radius >= 0.0)) throw InvalidArgument("radius_search: radius must be non-negative");
    const std::array<double, 3> q{query.x, query.y, query.z};
    std::vector<std::pair<double, std::uint32_t>> hits;
    radius_recurse(0, q, radius * radius, hits);
    std::sort(hits.begin(), hits.end());
    std::vector<Neighbor> out;
    out.reserve(hits.size());
    for (const auto& [d2, id] : hits) out.push_back({id, std::sqrt(d2)});
    return out;
  }

private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // range in order_ (leaves only)
    std::int32_t left = -1, right = -1;
    int axis = 0;
    double split = 0.0;
    std::array<double, 3> lo{}, hi{};  // bounding box of the subtree
    bool leaf() const { return left < 0; }
  };

  // Max-heap on (squared distance, source id): the top is the current worst hit.
  using Entry = std::pair<double, std::uint32_t>;
  using Heap = std::priority_queue<Entry>;

  std::int32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
    node.hi = {-node.lo[0], -node.lo[1], -node.lo[2]};
    for (std::uint32_t i = begin; i < end; ++i) {
      const auto& c = coords_[order_[i]];
      for (int a = 0; a < 3; ++a) {
        node.lo[a] = std::min(node.lo[a], static_cast<double>(c[a]));
        node.hi[a] = std::max(node.hi[a], static_cast<double>(c[a]));
      }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
      if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
    if (end - begin > kLeafSize && node.hi[axis] > node.lo[axis]) {
      const std::uint32_t mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](std::uint32_t a, std::uint32_t b) { return coords_[a][axis] < coords_[b][axis]; });
      node.axis = axis;
      node.split = coords_[order_[mid]][axis];
      const std::int32_t l = build(begin, mid);
      const std::int32_t r = build(mid, end);
      node.left = l;
      node.right = r;
    }
    nodes_[static_cast<std::size_t>(id)] = node;
    return id;
  }

  static double box_distance2(const Node& n, const std::array<double, 3>& q) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double d = q[a] < n.lo[a] ? n.lo[a] - q[a] : (q[a] > n.hi[a] ? q[a] - n.hi[a] : 0.0);
      d2 += d * d;
    }
    return d2;
  }

  double distance2(std::uint32_t local, const std::array<double, 3>& q) const {
    const auto& c = coords_[local];
    const double dx = c[0] - q[0], dy = c[1] - q[1], dz = c[2] - q[2];
    return dx * dx + dy * dy + dz * dz;
  }

  void knn_recurse(std::int32_t id, const std::array<double, 3>& q, std::size_t k, Heap& heap) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    // A box at exactly the worst distance may still hold a lower-index tie.
    if (heap.size() == k && box_distance2(n, q) > heap.top().first) return;
    if (n.leaf()) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const Entry e{distance2(order_[i], q), ids_[order_[i]]};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    const bool go_left = q[n.axis] < n.split;
    knn_recurse(go_left ? n.left : n.right, q, k, heap);
    knn_recurse(go_left ? n.right : n.left, q, k, heap);
  }

  void radius_recurse(std::int32_t id, const std::array<double, 3>& q, double r2,
                      std::vector<Entry>& hits) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (box_distance2(n, q) > r2) return;
    if (n.leaf()) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const double d2 = distance2(order_[i], q);
        if (d2 <= r2) hits.emplace_back(d2, ids_[order_[i]]);
      }
      return;
    }
    radius_recurse(n.left, q, r2, hits);
    radius_recurse(n.right, q, r2, hits);
  }

  std::vector<std::array<float, 3>> coords_;
  std::vector<std::uint32_t> ids_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

inline KdTree build_index(const PointCloud& cloud) { return KdTree(cloud); }

inline std::vector<Neighbor> knn_search(const KdTree& index, const Point3& query, std::size_t k) {
  return index.knn(query, k);
}

inline std::vector<Neighbor> radius_search(const KdTree& index, const Point3& query, double radius) {
  return index.radius_search(query, radius);
}

}  // namespace semloc
