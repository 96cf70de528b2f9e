// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"

using namespace semloc;
using namespace semloc::testing;

namespace {

std::vector<double> random_histogram(std::mt19937_64& rng, std::size_t dim, double zero_fraction = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(dim);
  double s = 0.0;
  for (auto& v : h) {
    v = u(rng) < zero_fraction ? 0.0 : u(rng);
    s += v;
  }
  if (s == 0.0) h[0] = s = 1.0;
  for (auto& v : h) v /= s;
  return h;
}

LabeledDataset blobs(std::size_t per_class, std::size_t classes, std::size_t dim, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  LabeledDataset d;
  for (std::size_t c = 0; c < classes; ++c) d.categories.push_back("class_" + std::string(1, char('a' + c)));
  for (std::size_t i = 0; i < per_class * classes; ++i) {
    const std::size_t c = i % classes;
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = (j == c % dim ? 3.0 : 0.0) + (c / dim) * 3.0 + g(rng);
    d.add(std::move(x), c);
  }
  return d;
}

// Histogram blobs: each class concentrates on its own bins.
LabeledDataset histogram_blobs(std::size_t per_class, std::size_t classes, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabeledDataset d;
  for (std::size_t c = 0; c < classes; ++c) d.categories.push_back(std::string(1, char('a' + c)) + "_room");
  for (std::size_t i = 0; i < per_class * classes; ++i) {
    const std::size_t c = i % classes;
    auto h = random_histogram(rng, dim, 0.0);
    for (std::size_t j = c; j < dim; j += classes) h[j] += 0.5;
    double s = 0.0;
    for (double v : h) s += v;
    for (double& v : h) v /= s;
    d.add(std::move(h), c);
  }
  return d;
}

std::size_t brute_knn_label(const LabeledDataset& d, std::span<const double> q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (q[j] - d.descriptors[i][j]) * (q[j] - d.descriptors[i][j]);
    all.push_back({s, i});
  }
  std::sort(all.begin(), all.end());
  k = std::min(k, all.size());
  std::vector<std::size_t> votes(d.categories.size(), 0);
  for (std::size_t i = 0; i < k; ++i) ++votes[d.labels[all[i].second]];
  const std::size_t top = *std::max_element(votes.begin(), votes.end());
  for (std::size_t i = 0; i < k; ++i)
    if (votes[d.labels[all[i].second]] == top) return d.labels[all[i].second];
  return 0;
}

}  // namespace

TEST(ChiSquare, DistanceExamples) {
  const std::vector<double> x{1, 0}, y{0, 1}, z{0, 1};
  EXPECT_EQ(chi_square_distance(x, x), 0.0);
  EXPECT_DOUBLE_EQ(chi_square_distance(x, y), 2.0);
  EXPECT_EQ(chi_square_distance(y, z), 0.0);
  EXPECT_THROW(chi_square_distance(x, std::vector<double>{1, 0, 0}), InvalidArgument);
  EXPECT_THROW(chi_square_distance(x, std::vector<double>{-1, 0}), InvalidArgument);
}

TEST(ChiSquare, KernelExamples) {
  const std::vector<double> x{1, 0}, y{0, 1};
  EXPECT_EQ(chi_square_kernel(x, x, 1.0), 1.0);
  EXPECT_NEAR(chi_square_kernel(x, y, 1.0), 0.13534, 1e-5);
  EXPECT_THROW(chi_square_kernel(x, y, 0.0), InvalidArgument);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_histogram(rng, 30), b = random_histogram(rng, 30);
    EXPECT_EQ(chi_square_kernel(a, b, 0.7), chi_square_kernel(b, a, 0.7));
    EXPECT_EQ(chi_square_kernel(a, a, 0.7), 1.0);
    const double k = chi_square_kernel(a, b, 0.7);
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 1.0);
  }
}

TEST(ChiSquare, GramMatrixIsPositiveSemidefinite) {
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> h;
  for (int i = 0; i < 50; ++i) h.push_back(random_histogram(rng, 50));
  for (double gamma : {0.02, 1.0, 10.0}) {
    Eigen::MatrixXd G(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) G(i, j) = chi_square_kernel(h[i], h[j], gamma);
    EXPECT_EQ((G - G.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8) << "gamma " << gamma;
  }
}

TEST(Knn, SingleClassAlwaysWins) {
  LabeledDataset d = blobs(10, 1, 3, 1.0, 1);
  d.categories.push_back("unused");
  const KnnModel m = knn_train(d, 7);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(knn_classify(m, random_histogram(rng, 3)).label, 0u);
}

TEST(Knn, MatchesExhaustiveScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng() % 400;
    LabeledDataset d = blobs(n / 3 + 1, 3, 2 + rng() % 4, 1.5, rng());
    const std::size_t k = 1 + rng() % 9;
    const KnnModel m = knn_train(d, k);
    std::normal_distribution<double> g(1.0, 2.0);
    std::vector<double> q(d.dimension());
    for (auto& v : q) v = g(rng);
    EXPECT_EQ(knn_classify(m, q).label, brute_knn_label(d, q, k)) << "trial " << trial;
  }
}

TEST(Knn, TieRules) {
  LabeledDataset d;
  d.categories = {"a", "b", "c"};
  // Equidistant training points around the query, distance ties by index.
  d.add({1, 0}, 1);
  d.add({-1, 0}, 0);
  d.add({0, 1}, 0);
  d.add({0, -1}, 1);
  d.add({5, 5}, 2);
  // k = 2: one vote each for b and a; the nearest (index 0, class b) wins.
  EXPECT_EQ(knn_classify(knn_train(d, 2), std::vector<double>{0, 0}).label, 1u);
  // k = 3: a has two votes.
  EXPECT_EQ(knn_classify(knn_train(d, 3), std::vector<double>{0, 0}).label, 0u);
  // k = 4: 2-2 tie, nearest neighbor is index 0 (class b).
  const Prediction p = knn_classify(knn_train(d, 4), std::vector<double>{0, 0});
  EXPECT_EQ(p.label, 1u);
  EXPECT_EQ(p.votes, (std::vector<double>{2, 2, 0}));
  EXPECT_DOUBLE_EQ(p.scores[0], 0.5);
}

TEST(Knn, KIsClampedAndErrorsRaised) {
  LabeledDataset d = blobs(2, 2, 2, 0.1, 4);
  EXPECT_EQ(knn_train(d, 50).k, 4u);
  EXPECT_THROW(knn_train(d, 0), InvalidArgument);
  EXPECT_THROW(knn_train(LabeledDataset{}, 3), InvalidArgument);
  EXPECT_THROW(knn_classify(knn_train(d, 1), std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(Knn, ChiSquareDistanceOption) {
  const LabeledDataset d = histogram_blobs(20, 3, 12, 5);
  const KnnModel m = knn_train(d, 1, KnnDistance::chi_square);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(knn_classify(m, d.descriptors[i]).label, d.labels[i]);
}

TEST(Knn, TrainingOrderOnlyMattersOnExactTies) {
  const LabeledDataset d = blobs(40, 3, 4, 1.2, 6);
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  LabeledDataset shuffled;
  shuffled.categories = d.categories;
  for (auto i : perm) shuffled.add(d.descriptors[i], d.labels[i]);
  const KnnModel a = knn_train(d, 7), b = knn_train(shuffled, 7);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(1.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> q(4);
    for (auto& v : q) v = g(rng);
    EXPECT_EQ(knn_classify(a, q).label, knn_classify(b, q).label);
  }
}

TEST(Smo, MinimalProblem) {
  const std::vector<std::vector<double>> x = {{0.0, 1.0}, {1.0, 0.0}};
  const std::vector<int> y = {1, -1};
  auto k = [&](std::size_t i, std::size_t j) { return chi_square_kernel(x[i], x[j], 0.5); };
  const SmoResult r = smo_solve(2, k, y);
  EXPECT_GT(r.alpha[0], 0.0);
  EXPECT_GT(r.alpha[1], 0.0);
  EXPECT_LE(max_kkt_violation(2, k, y, r, 1.0), 1e-3);
  const double f0 = r.bias + r.alpha[0] * k(0, 0) - r.alpha[1] * k(1, 0);
  const double f1 = r.bias + r.alpha[0] * k(0, 1) - r.alpha[1] * k(1, 1);
  EXPECT_GT(f0, 0.0);
  EXPECT_LT(f1, 0.0);
}

TEST(Smo, KktBoxAndMonotoneObjective) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LabeledDataset d = histogram_blobs(40, 2, 20, seed);
    std::vector<int> y(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = d.labels[i] == 0 ? 1 : -1;
    auto k = [&](std::size_t i, std::size_t j) { return chi_square_kernel(d.descriptors[i], d.descriptors[j], 2.0); };
    for (double C : {0.5, 10.0}) {
      SmoOptions o;
      o.C = C;
      o.record_objective = true;
      o.cache_bytes = 8 * 20 * sizeof(double);  // forces row eviction
      const SmoResult r = smo_solve(d.size(), k, y, o);
      for (double a : r.alpha) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, C);
      }
      double balance = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) balance += r.alpha[i] * y[i];
      EXPECT_NEAR(balance, 0.0, 1e-9);
      EXPECT_LE(max_kkt_violation(d.size(), k, y, r, C), 1e-3);
      ASSERT_EQ(r.objective_history.size(), r.iterations + 1);
      for (std::size_t i = 1; i < r.objective_history.size(); ++i)
        EXPECT_GE(r.objective_history[i], r.objective_history[i - 1] - 1e-12);
    }
  }
}

TEST(Smo, RejectsNonPositiveCAndCapsIterations) {
  const std::vector<int> y = {1, -1, 1, -1};
  auto k = [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.1 * double(i + j); };
  SmoOptions o;
  o.C = 0.0;
  EXPECT_THROW(smo_solve(4, k, y, o), InvalidArgument);
  o.C = 1.0;
  o.max_iterations = 1;
  o.tol = 1e-15;
  EXPECT_THROW(smo_solve(4, k, y, o), NumericError);
}

TEST(Svm, SeparableLinearBlobsFitPerfectly) {
  const LabeledDataset d = blobs(50, 2, 2, 0.3, 9);
  KernelConfig kc;
  kc.type = KernelType::linear;
  const SvmModel m = svm_train(d, kc, 10.0);
  ASSERT_EQ(m.machines.size(), 1u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(svm_classify(m, d.descriptors[i]).label, d.labels[i]);
  for (const auto& mach : m.machines)
    for (double c : mach.coef) EXPECT_LE(std::abs(c), 10.0 + 1e-12);
}

TEST(Svm, TwoPointsBecomeSupportVectors) {
  LabeledDataset d;
  d.categories = {"hall", "corridor"};
  d.add({0.9, 0.1}, 0);
  d.add({0.2, 0.8}, 1);
  const SvmModel m = svm_train(d);
  EXPECT_EQ(m.vectors.size(), 2u);
  EXPECT_EQ(svm_classify(m, d.descriptors[0]).label, 0u);
  EXPECT_EQ(svm_classify(m, d.descriptors[1]).label, 1u);
  const Prediction p = svm_classify(m, std::vector<double>{0.7, 0.3});
  EXPECT_EQ(p.votes[0] + p.votes[1], 1.0);
  EXPECT_NEAR(m.kernel.gamma, 0.5, 0.0);
}

TEST(Svm, MulticlassHistogramsTrainAndClassify) {
  const LabeledDataset d = histogram_blobs(30, 5, 25, 10);
  const SvmModel m = svm_train(d);
  EXPECT_EQ(m.machines.size(), 10u);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) correct += svm_classify(m, d.descriptors[i]).label == d.labels[i];
  EXPECT_EQ(correct, d.size());
  const Prediction p = svm_classify(m, d.descriptors[3]);
  EXPECT_NEAR(std::accumulate(p.scores.begin(), p.scores.end(), 0.0), 1.0, 1e-12);
}

TEST(Svm, CategoryEnumerationOrderDoesNotChangeLabels) {
  const LabeledDataset d = histogram_blobs(12, 4, 16, 11);
  // Reverse the category list and remap labels accordingly.
  LabeledDataset r;
  r.categories.assign(d.categories.rbegin(), d.categories.rend());
  const std::size_t nc = d.categories.size();
  for (std::size_t i = 0; i < d.size(); ++i) r.add(d.descriptors[i], nc - 1 - d.labels[i]);
  const SvmModel a = svm_train(d), b = svm_train(r);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto q = random_histogram(rng, 16);
    EXPECT_EQ(a.categories[svm_classify(a, q).label], b.categories[svm_classify(b, q).label]);
  }
}

TEST(Svm, GammaResolution) {
  const LabeledDataset d = histogram_blobs(10, 2, 8, 13);
  EXPECT_DOUBLE_EQ(svm_train(d).kernel.gamma, 1.0 / 8.0);
  KernelConfig kc;
  kc.gamma = 3.0;
  EXPECT_EQ(svm_train(d, kc).kernel.gamma, 3.0);
  kc.gamma_from_mean = true;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j, ++pairs) sum += chi_square_distance(d.descriptors[i], d.descriptors[j]);
  const SvmModel m = svm_train(d, kc);
  EXPECT_NEAR(m.kernel.gamma, pairs / sum, 1e-12);
  EXPECT_FALSE(m.kernel.gamma_from_mean);
}

TEST(Svm, Errors) {
  LabeledDataset one = blobs(5, 1, 2, 1.0, 1);
  one.categories.push_back("empty");
  EXPECT_THROW(svm_train(one), InvalidArgument);
  const LabeledDataset d = blobs(5, 2, 2, 1.0, 1);
  EXPECT_THROW(svm_train(d, {}, 0.0), InvalidArgument);
  EXPECT_THROW(svm_classify(SvmModel{}, std::vector<double>{1, 2}), InvalidArgument);
  EXPECT_THROW(svm_classify(svm_train(d), std::vector<double>{1}), InvalidArgument);
}

TEST(Evaluate, Examples) {
  const std::vector<std::string> cats = {"a", "b"};
  const auto perfect = evaluate({0, 1, 1, 0}, {0, 1, 1, 0}, cats);
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.confusion, (std::vector<std::vector<std::size_t>>{{2, 0}, {0, 2}}));
  const auto wrong = evaluate({1, 0, 0}, {0, 1, 1}, cats);
  EXPECT_EQ(wrong.accuracy, 0.0);
  EXPECT_EQ(wrong.confusion, (std::vector<std::vector<std::size_t>>{{0, 1}, {2, 0}}));

  const std::vector<std::string> three = {"x", "y", "z"};
  const std::vector<std::size_t> truth = {0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
  const std::vector<std::size_t> pred = {0, 0, 1, 1, 1, 2, 2, 2, 2, 0};
  const auto r = evaluate(pred, truth, three);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.7);
  EXPECT_EQ(r.total(), 10u);
  EXPECT_DOUBLE_EQ(r.recall[2], 0.75);
  EXPECT_DOUBLE_EQ(r.precision[0], 2.0 / 3.0);

  EXPECT_THROW(evaluate({0}, {0, 1}, cats), InvalidArgument);
  EXPECT_THROW(evaluate({0, 5}, {0, 1}, cats), InvalidArgument);
}

TEST(Evaluate, TotalAlwaysEqualsSampleCount) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = rng() % 60, nc = 2 + rng() % 5;
    std::vector<std::size_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng() % nc, b[i] = rng() % nc;
    const auto r = evaluate(a, b, std::vector<std::string>(nc, "c"));
    EXPECT_EQ(r.total(), n);
  }
}

TEST(ModelIo, SvmAndKnnRoundTrip) {
  const LabeledDataset d = histogram_blobs(10, 3, 12, 15);
  const SvmModel m = svm_train(d);
  std::stringstream ss;
  write_svm_model(ss, m);
  const SvmModel back = read_svm_model(ss);
  EXPECT_EQ(back.vectors, m.vectors);
  EXPECT_EQ(back.categories, m.categories);
  EXPECT_EQ(back.kernel.gamma, m.kernel.gamma);
  ASSERT_EQ(back.machines.size(), m.machines.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    EXPECT_EQ(svm_classify(back, d.descriptors[i]).votes, svm_classify(m, d.descriptors[i]).votes);

  const KnnModel km = knn_train(d, 5, KnnDistance::chi_square);
  std::stringstream ks;
  write_knn_model(ks, km);
  const KnnModel kb = read_knn_model(ks);
  EXPECT_EQ(kb.k, 5u);
  EXPECT_EQ(kb.distance, KnnDistance::chi_square);
  EXPECT_EQ(kb.data.descriptors, km.data.descriptors);
  EXPECT_EQ(kb.data.labels, km.data.labels);

  std::stringstream junk("SLSVM001\x07");
  EXPECT_THROW(read_svm_model(junk), DataError);
}
