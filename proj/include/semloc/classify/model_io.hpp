// SPDX-License-Identifier: Apache-2.0
//
// Classifier containers, little-endian:
//   SVM "SLSVM001" u32 version | u8 kernel | f64 gamma | f64 C | f64 tol |
//       categories | u32 dim | u32 nvec | vectors (f64) | u32 machines |
//       per machine: u32 pos | u32 neg | f64 bias | u64 iterations |
//                    u32 nsv | nsv * (u32 index, f64 coef)
//   kNN "SLKNN001" u32 version | u8 distance | u32 k | categories | u32 dim |
//       u32 n | n * (u32 label, dim f64)
// categories = u32 count | count strings
#pragma once

#include "semloc/classify/knn.hpp"
#include "semloc/classify/svm.hpp"

namespace semloc {

inline constexpr char kSvmMagic[9] = "SLSVM001";
inline constexpr char kKnnMagic[9] = "SLKNN001";
constexpr std::uint32_t kModelFormatVersion = 1;

namespace detail {

inline void write_categories(std::ostream& os, const std::vector<std::string>& categories) {
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(categories.size()));
  for (const auto& c : categories) binary::write_string(os, c);
}

inline std::vector<std::string> read_categories(std::istream& is) {
  const auto n = binary::read<std::uint32_t>(is);
  if (n > (1u << 16)) throw DataError("model: implausible category count");
  std::vector<std::string> out(n);
  for (auto& c : out) c = binary::read_string(is);
  return out;
}

inline std::vector<double> read_vector(std::istream& is, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = binary::read<double>(is);
  return v;
}

}  // namespace detail

inline void write_svm_model(std::ostream& os, const SvmModel& m) {
  binary::write_header(os, kSvmMagic, kModelFormatVersion);
  binary::write<std::uint8_t>(os, static_cast<std::uint8_t>(m.kernel.type));
  binary::write<double>(os, m.kernel.gamma);
  binary::write<double>(os, m.C);
  binary::write<double>(os, m.tol);
  detail::write_categories(os, m.categories);
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.dimension()));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.vectors.size()));
  for (const auto& v : m.vectors)
    for (double x : v) binary::write(os, x);
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.machines.size()));
  for (const auto& b : m.machines) {
    binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(b.positive));
    binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(b.negative));
    binary::write<double>(os, b.bias);
    binary::write<std::uint64_t>(os, b.iterations);
    binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(b.support.size()));
    for (std::size_t s = 0; s < b.support.size(); ++s) {
      binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(b.support[s]));
      binary::write<double>(os, b.coef[s]);
    }
  }
}

inline SvmModel read_svm_model(std::istream& is) {
  if (binary::read_header(is, kSvmMagic) != kModelFormatVersion) throw DataError("unsupported SVM model version");
  SvmModel m;
  const auto kt = binary::read<std::uint8_t>(is);
  if (kt > static_cast<std::uint8_t>(KernelType::linear)) throw DataError("SVM model: unknown kernel tag");
  m.kernel.type = static_cast<KernelType>(kt);
  m.kernel.gamma = binary::read<double>(is);
  m.C = binary::read<double>(is);
  m.tol = binary::read<double>(is);
  m.categories = detail::read_categories(is);
  const auto dim = binary::read<std::uint32_t>(is);
  const auto nvec = binary::read<std::uint32_t>(is);
  m.vectors.reserve(nvec);
  for (std::uint32_t i = 0; i < nvec; ++i) m.vectors.push_back(detail::read_vector(is, dim));
  const auto nm = binary::read<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < nm; ++i) {
    BinaryMachine b;
    b.positive = binary::read<std::uint32_t>(is);
    b.negative = binary::read<std::uint32_t>(is);
    if (b.positive >= m.categories.size() || b.negative >= m.categories.size())
      throw DataError("SVM model: machine refers to an unknown category");
    b.bias = binary::read<double>(is);
    b.iterations = binary::read<std::uint64_t>(is);
    const auto ns = binary::read<std::uint32_t>(is);
    for (std::uint32_t s = 0; s < ns; ++s) {
      const auto idx = binary::read<std::uint32_t>(is);
      if (idx >= nvec) throw DataError("SVM model: support index out of range");
      b.support.push_back(idx);
      b.coef.push_back(binary::read<double>(is));
    }
    m.machines.push_back(std::move(b));
  }
  return m;
}

inline void write_knn_model(std::ostream& os, const KnnModel& m) {
  binary::write_header(os, kKnnMagic, kModelFormatVersion);
  binary::write<std::uint8_t>(os, static_cast<std::uint8_t>(m.distance));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.k));
  detail::write_categories(os, m.data.categories);
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.data.dimension()));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.data.size()));
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.data.labels[i]));
    for (double x : m.data.descriptors[i]) binary::write(os, x);
  }
}

inline KnnModel read_knn_model(std::istream& is) {
  if (binary::read_header(is, kKnnMagic) != kModelFormatVersion) throw DataError("unsupported kNN model version");
  KnnModel m;
  const auto dt = binary::read<std::uint8_t>(is);
  if (dt > static_cast<std::uint8_t>(KnnDistance::chi_square)) throw DataError("kNN model: unknown distance tag");
  m.distance = static_cast<KnnDistance>(dt);
  m.k = binary::read<std::uint32_t>(is);
  m.data.categories = detail::read_categories(is);
  const auto dim = binary::read<std::uint32_t>(is);
  const auto n = binary::read<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto label = binary::read<std::uint32_t>(is);
    m.data.add(detail::read_vector(is, dim), label);
  }
  try {
    m.data.validate();
  } catch (const Error& e) {
    throw DataError(std::string("kNN model: ") + e.what());
  }
  if (m.k == 0 || m.k > m.data.size()) throw DataError("kNN model: k outside [1, n]");
  return m;
}

}  // namespace semloc
