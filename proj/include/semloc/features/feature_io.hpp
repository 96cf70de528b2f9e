// SPDX-License-Identifier: Apache-2.0
//
// FeatureSet container:
//   "SLFEATS1" u32 version | u8 kind | u32 dimension | u64 count | u64 dropped |
//   string source | count * dimension f32 (row-major) | count * u32 keypoint id
// All integers and floats little-endian.
#pragma once

#include <fstream>

#include "semloc/features/feature_set.hpp"

namespace semloc {

inline constexpr char kFeatureMagic[9] = "SLFEATS1";
constexpr std::uint32_t kFeatureFormatVersion = 1;

inline void write_feature_set(std::ostream& os, const FeatureSet& set) {
  binary::write_header(os, kFeatureMagic, kFeatureFormatVersion);
  binary::write<std::uint8_t>(os, static_cast<std::uint8_t>(set.kind));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(set.dimension()));
  binary::write<std::uint64_t>(os, set.size());
  binary::write<std::uint64_t>(os, set.dropped);
  binary::write_string(os, set.source);
  for (const auto& row : set.vectors)
    for (float v : row) binary::write(os, v);
  for (auto id : set.keypoint_ids) binary::write(os, id);
}

inline FeatureSet read_feature_set(std::istream& is) {
  const auto version = binary::read_header(is, kFeatureMagic);
  if (version != kFeatureFormatVersion) throw DataError("unsupported feature set version");
  const auto tag = binary::read<std::uint8_t>(is);
  if (tag < 1 || tag > 6) throw DataError("unknown descriptor kind tag " + std::to_string(tag));
  FeatureSet set(static_cast<DescriptorKind>(tag));
  const auto dim = binary::read<std::uint32_t>(is);
  if (dim != set.dimension()) throw DataError("feature set dimension does not match its kind");
  const auto count = binary::read<std::uint64_t>(is);
  set.dropped = binary::read<std::uint64_t>(is);
  set.source = binary::read_string(is);
  set.vectors.assign(count, std::vector<float>(dim));
  for (auto& row : set.vectors)
    for (auto& v : row) v = binary::read<float>(is);
  set.keypoint_ids.resize(count);
  for (auto& id : set.keypoint_ids) id = binary::read<std::uint32_t>(is);
  return set;
}

inline void save_feature_set(const FeatureSet& set, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError(path + ": cannot open for writing");
  write_feature_set(os, set);
  if (!os) throw DataError(path + ": write failed");
}

inline FeatureSet load_feature_set(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError(path + ": cannot open feature set");
  return read_feature_set(is);
}

}  // namespace semloc
