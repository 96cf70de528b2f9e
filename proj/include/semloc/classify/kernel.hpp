// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "semloc/common.hpp"

namespace semloc {

/// chi2(x, y) = sum_i (x_i - y_i)^2 / (x_i + y_i); terms with x_i + y_i = 0 add nothing.
inline double chi_square_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw InvalidArgument("chi_square_distance: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || y[i] < 0.0) throw InvalidArgument("chi_square_distance: negative entry");
    const double s = x[i] + y[i];
    if (s == 0.0) continue;
    const double d = x[i] - y[i];
    sum += d * d / s;
  }
  return sum;
}

/// Exponential chi-square kernel exp(-gamma * chi2(x, y)).
inline double chi_square_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("chi_square_kernel: gamma must be positive");
  return std::exp(-gamma * chi_square_distance(x, y));
}

enum class KernelType { chi_square, rbf, linear };

inline std::string_view kernel_name(KernelType t) {
  switch (t) {
    case KernelType::chi_square: return "chi_square";
    case KernelType::rbf: return "rbf";
    case KernelType::linear: return "linear";
  }
  return "?";
}

inline KernelType parse_kernel(std::string_view name) {
  for (auto t : {KernelType::chi_square, KernelType::rbf, KernelType::linear})
    if (kernel_name(t) == name) return t;
  throw InvalidArgument("unknown kernel '" + std::string(name) + "' (supported: chi_square, rbf, linear)");
}

struct KernelConfig {
  KernelType type = KernelType::chi_square;
  /// Width for chi_square and rbf; 0 means 1 / dimension at training time.
  double gamma = 0.0;
  /// When set, training replaces gamma by 1 / (mean pairwise distance of the
  /// training set), the distance being chi2 or squared Euclidean.
  bool gamma_from_mean = false;

  /// The distance inside the exponential (chi2 or squared Euclidean).
  double base_distance(std::span<const double> x, std::span<const double> y) const {
    if (type == KernelType::chi_square) return chi_square_distance(x, y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    return d2;
  }

  double operator()(std::span<const double> x, std::span<const double> y) const {
    switch (type) {
      case KernelType::chi_square: return chi_square_kernel(x, y, gamma);
      case KernelType::rbf: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
        return std::exp(-gamma * d2);
      }
      case KernelType::linear: {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
        return dot;
      }
    }
    return 0.0;
  }
};

}  // namespace semloc
