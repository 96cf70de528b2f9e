// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semloc/common.hpp"

namespace semloc {

enum class DescriptorKind : std::uint8_t { pfh = 1, pfhrgb = 2, fpfh = 3, shot = 4, cshot = 5, esf = 6 };

inline constexpr std::array<DescriptorKind, 6> kAllDescriptorKinds = {
    DescriptorKind::pfh, DescriptorKind::pfhrgb, DescriptorKind::fpfh,
    DescriptorKind::shot, DescriptorKind::cshot, DescriptorKind::esf};

/// Fixed output length per descriptor kind.
constexpr std::size_t descriptor_dimension(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::pfh: return 125;
    case DescriptorKind::pfhrgb: return 250;
    case DescriptorKind::fpfh: return 33;
    case DescriptorKind::shot: return 352;
    case DescriptorKind::cshot: return 1344;
    case DescriptorKind::esf: return 640;
  }
  return 0;
}

constexpr std::string_view descriptor_name(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::pfh: return "pfh";
    case DescriptorKind::pfhrgb: return "pfhrgb";
    case DescriptorKind::fpfh: return "fpfh";
    case DescriptorKind::shot: return "shot";
    case DescriptorKind::cshot: return "cshot";
    case DescriptorKind::esf: return "esf";
  }
  return "?";
}

inline DescriptorKind parse_descriptor_kind(std::string_view name) {
  for (auto kind : kAllDescriptorKinds)
    if (descriptor_name(kind) == name) return kind;
  throw InvalidArgument("unknown feature '" + std::string(name) +
                        "' (supported: pfh, pfhrgb, fpfh, shot, cshot, esf)");
}

constexpr bool descriptor_needs_color(DescriptorKind kind) {
  return kind == DescriptorKind::pfhrgb || kind == DescriptorKind::cshot;
}

struct FeatureVector {
  DescriptorKind kind = DescriptorKind::pfh;
  std::vector<float> values;

  std::size_t dimension() const { return values.size(); }
};

/// Local descriptors of one cloud, all of the same kind.
struct FeatureSet {
  DescriptorKind kind = DescriptorKind::pfh;
  std::vector<std::vector<float>> vectors;
  /// Keypoint (position in the KeypointSet) each vector was computed at.
  std::vector<std::uint32_t> keypoint_ids;
  std::size_t dropped = 0;
  std::string source;

  FeatureSet() = default;
  explicit FeatureSet(DescriptorKind k) : kind(k) {}

  std::size_t dimension() const { return descriptor_dimension(kind); }
  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
  std::size_t kept() const { return vectors.size(); }

  void add(std::uint32_t keypoint, std::vector<float> values) {
    if (values.size() != dimension())
      throw InvalidArgument("feature of dimension " + std::to_string(values.size()) + " added to " +
                            std::string(descriptor_name(kind)) + " set");
    vectors.push_back(std::move(values));
    keypoint_ids.push_back(keypoint);
  }
};

}  // namespace semloc
