// SPDX-License-Identifier: Apache-2.0
//
// Dictionary container:
//   "SLDICT01" u32 version | u8 kind | u32 k | u32 dimension | u64 seed |
//   f64 inertia | u32 iterations | k * dimension f32 (row-major)
#pragma once

#include <fstream>

#include "semloc/bow/dictionary.hpp"

namespace semloc {

inline constexpr char kDictionaryMagic[9] = "SLDICT01";
constexpr std::uint32_t kDictionaryFormatVersion = 1;

inline void write_dictionary(std::ostream& os, const Dictionary& dict) {
  binary::write_header(os, kDictionaryMagic, kDictionaryFormatVersion);
  binary::write<std::uint8_t>(os, static_cast<std::uint8_t>(dict.kind));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(dict.k()));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(dict.words.empty() ? 0 : dict.words[0].size()));
  binary::write<std::uint64_t>(os, dict.seed);
  binary::write<double>(os, dict.inertia);
  binary::write<std::uint32_t>(os, dict.iterations);
  for (const auto& w : dict.words)
    for (float v : w) binary::write(os, v);
}

inline Dictionary read_dictionary(std::istream& is) {
  if (binary::read_header(is, kDictionaryMagic) != kDictionaryFormatVersion)
    throw DataError("unsupported dictionary version");
  Dictionary dict;
  const auto tag = binary::read<std::uint8_t>(is);
  if (tag < 1 || tag > 6) throw DataError("unknown descriptor kind tag in dictionary");
  dict.kind = static_cast<DescriptorKind>(tag);
  const auto k = binary::read<std::uint32_t>(is);
  const auto dim = binary::read<std::uint32_t>(is);
  if (k == 0 || dim != dict.dimension()) throw DataError("dictionary header inconsistent with its kind");
  dict.seed = binary::read<std::uint64_t>(is);
  dict.inertia = binary::read<double>(is);
  dict.iterations = binary::read<std::uint32_t>(is);
  dict.words.assign(k, std::vector<float>(dim));
  for (auto& w : dict.words)
    for (auto& v : w) v = binary::read<float>(is);
  return dict;
}

inline void save_dictionary(const Dictionary& dict, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError(path + ": cannot open for writing");
  write_dictionary(os, dict);
  if (!os) throw DataError(path + ": write failed");
}

inline Dictionary load_dictionary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError(path + ": cannot open dictionary");
  return read_dictionary(is);
}

}  // namespace semloc
