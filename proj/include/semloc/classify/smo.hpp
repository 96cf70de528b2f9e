// SPDX-License-Identifier: Apache-2.0
//
// Sequential minimal optimization for the soft-margin SVM dual
//
//   min_a  f(a) = 1/2 a^T Q a - e^T a,   Q_ij = y_i y_j K(x_i, x_j)
//   s.t.   0 <= a_i <= C,  y^T a = 0
//
// Working pairs are maximal violating pairs: i maximizes -y_t grad_t over
// I_up, j minimizes it over I_low (equivalently j maximizes |E_i - E_j|).
// Training stops when the gap m - M drops to tol.
#pragma once

#include <functional>
#include <list>
#include <unordered_map>

#include "semloc/classify/kernel.hpp"

namespace semloc {

/// Least-recently-used cache of kernel rows for one binary problem.
class KernelRowCache {
public:
  using RowFn = std::function<void(std::size_t, std::vector<double>&)>;

  KernelRowCache(std::size_t n, std::size_t budget_bytes, RowFn fill) : n_(n), fill_(std::move(fill)) {
    capacity_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(1, n * sizeof(double)));
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    lru_.emplace_front(i, std::vector<double>(n_));
    fill_(i, lru_.front().second);
    index_[i] = lru_.begin();
    ++misses_;
    return lru_.front().second;
  }

  std::size_t misses() const { return misses_; }

private:
  std::size_t n_;
  std::size_t capacity_;
  RowFn fill_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
  std::size_t misses_ = 0;
};

struct SmoOptions {
  double C = 1.0;
  double tol = 1e-3;
  std::size_t max_iterations = 0;  ///< 0: max(10^7, 100 n)
  std::size_t cache_bytes = std::size_t{256} << 20;
  bool record_objective = false;
};

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;  ///< decision(x) = sum_i alpha_i y_i K(x_i, x) + bias
  std::size_t iterations = 0;
  double final_gap = 0.0;
  /// Dual objective e^T a - 1/2 a^T Q a after every step (when recorded).
  std::vector<double> objective_history;
};

/// Solves one binary problem. `kernel(i, j)` evaluates K between training
/// points i and j; y holds +1 / -1.
inline SmoResult smo_solve(std::size_t n, const std::function<double(std::size_t, std::size_t)>& kernel,
                           const std::vector<int>& y, const SmoOptions& options = {}) {
  if (!(options.C > 0.0)) throw InvalidArgument("svm_train: C must be positive");
  if (y.size() != n) throw InvalidArgument("smo_solve: label count mismatch");
  const double C = options.C;
  const std::size_t max_iter =
      options.max_iterations ? options.max_iterations : std::max<std::size_t>(10000000, 100 * n);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = kernel(i, i);
  KernelRowCache cache(n, options.cache_bytes, [&](std::size_t i, std::vector<double>& row) {
    for (std::size_t t = 0; t < n; ++t) row[t] = t == i ? diag[i] : kernel(i, t);
  });

  SmoResult r;
  r.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // Q a - e
  auto& a = r.alpha;

  auto in_up = [&](std::size_t t) { return (y[t] > 0 && a[t] < C) || (y[t] < 0 && a[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] < 0 && a[t] < C) || (y[t] > 0 && a[t] > 0.0); };
  auto dual_objective = [&] {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += a[t] * (grad[t] - 1.0);
    return -0.5 * s;
  };
  if (options.record_objective) r.objective_history.push_back(0.0);

  double m = 0.0, M = 0.0;
  for (;;) {
    std::size_t i = n, j = n;
    m = -std::numeric_limits<double>::infinity();
    M = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > m) m = v, i = t;
      if (in_low(t) && v < M) M = v, j = t;
    }
    if (i == n || j == n || m - M <= options.tol) break;
    if (r.iterations >= max_iter)
      throw NumericError("svm_train: SMO did not converge within " + std::to_string(max_iter) + " iterations");
    ++r.iterations;

    const auto& Ki = cache.row(i);
    const std::vector<double> Ki_copy = Ki;  // the next row() call may evict it
    const auto& Kj = cache.row(j);
    const double Kij = Ki_copy[j];
    const double old_ai = a[i], old_aj = a[j];
    constexpr double kTau = 1e-12;

    if (y[i] != y[j]) {
      double quad = diag[i] + diag[j] + 2.0 * Kij * y[i] * y[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) a[j] = 0.0, a[i] = diff;
      } else if (a[i] < 0.0) {
        a[i] = 0.0, a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) a[i] = C, a[j] = C - diff;
      } else if (a[j] > C) {
        a[j] = C, a[i] = C + diff;
      }
    } else {
      double quad = diag[i] + diag[j] - 2.0 * Kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) a[i] = C, a[j] = sum - C;
      } else if (a[j] < 0.0) {
        a[j] = 0.0, a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) a[j] = C, a[i] = sum - C;
      } else if (a[i] < 0.0) {
        a[i] = 0.0, a[j] = sum;
      }
    }

    const double dai = a[i] - old_ai, daj = a[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * Ki_copy[t] * dai + y[j] * Kj[t] * daj);
    if (options.record_objective) r.objective_history.push_back(dual_objective());
  }
  r.final_gap = std::isfinite(m) && std::isfinite(M) ? m - M : 0.0;

  // Bias: mean of -y_t grad_t over free vectors, else the midpoint of the gap.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t] > 0.0 && a[t] < C) {
      free_sum += -y[t] * grad[t];
      ++free_count;
    }
  }
  if (free_count > 0) {
    r.bias = free_sum / static_cast<double>(free_count);
  } else {
    double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t)) lb = std::max(lb, v);
      if (in_low(t)) ub = std::min(ub, v);
    }
    if (!std::isfinite(ub)) ub = lb;
    if (!std::isfinite(lb)) lb = ub;
    r.bias = std::isfinite(ub) ? 0.5 * (ub + lb) : 0.0;
  }
  return r;
}

/// Largest KKT violation of a solution, measured on y_t f(x_t) with the
/// solver's own bias: a=0 needs y f >= 1, 0<a<C needs y f = 1, a=C needs y f <= 1.
inline double max_kkt_violation(std::size_t n, const std::function<double(std::size_t, std::size_t)>& kernel,
                                const std::vector<int>& y, const SmoResult& r, double C) {
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double f = r.bias;
    for (std::size_t s = 0; s < n; ++s)
      if (r.alpha[s] != 0.0) f += r.alpha[s] * y[s] * kernel(s, t);
    const double yf = y[t] * f;
    double v = 0.0;
    if (r.alpha[t] <= 0.0)
      v = std::max(0.0, 1.0 - yf);
    else if (r.alpha[t] >= C)
      v = std::max(0.0, yf - 1.0);
    else
      v = std::abs(yf - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace semloc
