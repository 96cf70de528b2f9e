// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <numeric>

#include "semloc/classify/dataset.hpp"
#include "semloc/classify/knn.hpp"
#include "semloc/classify/smo.hpp"

namespace semloc {

/// One binary machine of the one-vs-one ensemble. The positive class is the
/// one whose name sorts first, so the ensemble does not depend on the order
/// in which categories were enumerated.
struct BinaryMachine {
  std::size_t positive = 0;  ///< category index voted for when decision > 0
  std::size_t negative = 0;
  std::vector<std::size_t> support;  ///< indices into SvmModel::vectors
  std::vector<double> coef;          ///< alpha_i * y_i
  double bias = 0.0;
  std::size_t iterations = 0;
};

struct SvmModel {
  KernelConfig kernel;  ///< gamma already resolved
  double C = 1.0;
  double tol = 1e-3;
  std::vector<std::string> categories;
  std::vector<std::vector<double>> vectors;  ///< support vectors shared by all machines
  std::vector<BinaryMachine> machines;

  bool trained() const { return !machines.empty(); }
  std::size_t dimension() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

/// Trains one machine per unordered category pair. Categories with no
/// examples take no part; at least two populated categories are required.
inline SvmModel svm_train(const LabeledDataset& data, KernelConfig kernel = {}, double C = 1.0, double tol = 1e-3) {
  data.validate();
  if (!(C > 0.0)) throw InvalidArgument("svm_train: C must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("svm_train: tol must be positive");
  if (data.distinct_labels() < 2) throw InvalidArgument("svm_train: at least two classes are required");
  if (kernel.gamma < 0.0) throw InvalidArgument("svm_train: gamma must be non-negative");
  if (kernel.gamma_from_mean && kernel.type != KernelType::linear) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
      for (std::size_t j = i + 1; j < data.size(); ++j, ++pairs)
        sum += kernel.base_distance(data.descriptors[i], data.descriptors[j]);
    kernel.gamma = sum > 0.0 ? static_cast<double>(pairs) / sum : 1.0;
    kernel.gamma_from_mean = false;
  }
  if (kernel.gamma == 0.0) kernel.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(1, data.dimension()));

  std::vector<std::vector<std::size_t>> members(data.categories.size());
  for (std::size_t i = 0; i < data.size(); ++i) members[data.labels[i]].push_back(i);
  std::vector<std::size_t> populated;
  for (std::size_t c = 0; c < members.size(); ++c)
    if (!members[c].empty()) populated.push_back(c);
  std::sort(populated.begin(), populated.end(),
            [&](std::size_t a, std::size_t b) { return data.categories[a] < data.categories[b]; });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < populated.size(); ++a)
    for (std::size_t b = a + 1; b < populated.size(); ++b) pairs.emplace_back(populated[a], populated[b]);

  struct RawMachine {
    std::vector<std::size_t> support;  // dataset indices
    std::vector<double> coef;
    double bias = 0.0;
    std::size_t iterations = 0;
  };
  std::vector<RawMachine> raw(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [pos, neg] = pairs[p];
    std::vector<std::size_t> idx = members[pos];
    idx.insert(idx.end(), members[neg].begin(), members[neg].end());
    std::vector<int> y(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) y[t] = data.labels[idx[t]] == pos ? 1 : -1;
    auto k = [&](std::size_t i, std::size_t j) { return kernel(data.descriptors[idx[i]], data.descriptors[idx[j]]); };
    SmoOptions opts;
    opts.C = C;
    opts.tol = tol;
    const SmoResult r = smo_solve(idx.size(), k, y, opts);
    RawMachine& m = raw[p];
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if (r.alpha[t] > 0.0) {
        m.support.push_back(idx[t]);
        m.coef.push_back(r.alpha[t] * y[t]);
      }
    }
    m.bias = r.bias;
    m.iterations = r.iterations;
  });

  SvmModel model;
  model.kernel = kernel;
  model.C = C;
  model.tol = tol;
  model.categories = data.categories;
  std::map<std::size_t, std::size_t> remap;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    BinaryMachine m;
    m.positive = pairs[p].first;
    m.negative = pairs[p].second;
    m.coef = raw[p].coef;
    m.bias = raw[p].bias;
    m.iterations = raw[p].iterations;
    for (std::size_t s : raw[p].support) {
      auto [it, inserted] = remap.emplace(s, model.vectors.size());
      if (inserted) model.vectors.push_back(data.descriptors[s]);
      m.support.push_back(it->second);
    }
    model.machines.push_back(std::move(m));
  }
  return model;
}

/// Raw output of one machine; positive favors machine.positive.
inline double svm_decision(const SvmModel& model, const BinaryMachine& machine, std::span<const double> x) {
  double f = machine.bias;
  for (std::size_t s = 0; s < machine.support.size(); ++s)
    f += machine.coef[s] * model.kernel(model.vectors[machine.support[s]], x);
  return f;
}

/// One-vs-one voting. Vote ties go to the largest summed |decision| over the
/// machines a class won, then to the category name that sorts first.
inline Prediction svm_classify(const SvmModel& model, std::span<const double> x) {
  if (!model.trained()) throw InvalidArgument("svm_classify: model is not trained");
  if (x.size() != model.dimension())
    throw InvalidArgument("svm_classify: query dimension " + std::to_string(x.size()) + " vs model " +
                          std::to_string(model.dimension()));
  const std::size_t nc = model.categories.size();
  Prediction p;
  p.votes.assign(nc, 0.0);
  std::vector<double> margin(nc, 0.0);
  for (const auto& m : model.machines) {
    const double f = svm_decision(model, m, x);
    const std::size_t winner = f > 0.0 ? m.positive : m.negative;
    p.votes[winner] += 1.0;
    margin[winner] += std::abs(f);
  }
  std::size_t best = nc;
  for (std::size_t c = 0; c < nc; ++c) {
    if (best == nc) {
      best = c;
      continue;
    }
    if (p.votes[c] != p.votes[best]) {
      if (p.votes[c] > p.votes[best]) best = c;
    } else if (margin[c] != margin[best]) {
      if (margin[c] > margin[best]) best = c;
    } else if (model.categories[c] < model.categories[best]) {
      best = c;
    }
  }
  p.label = best;
  const double total = std::accumulate(p.votes.begin(), p.votes.end(), 0.0);
  p.scores = p.votes;
  if (total > 0.0)
    for (double& s : p.scores) s /= total;
  return p;
}

}  // namespace semloc
