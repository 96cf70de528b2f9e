// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace semloc;
using namespace semloc::testing;

namespace {

// Float storage bounds how closely a normalized histogram can sum to 1.
constexpr double kSumTol = 1e-6;

struct Prepared {
  PointCloud cloud;
  KdTree index;
  KeypointSet keypoints;
};

Prepared prepare(PointCloud raw, double normal_radius, const std::vector<std::int64_t>& kp) {
  PointCloud c = estimate_normals(raw, normal_radius);
  KdTree index(c);
  KeypointSet k = keypoints_at(c, kp);
  return {std::move(c), std::move(index), std::move(k)};
}

PointCloud colored(PointCloud c, Rgb color) {
  c.set_has_color(true);
  for (auto& p : c.points()) p.color = color;
  return c;
}

}  // namespace

TEST(PairFeature, HandCase) {
  const PairFeature f = darboux_pair({0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 1});
  EXPECT_NEAR(f.alpha, 0.0, 1e-12);
  EXPECT_NEAR(f.phi, 0.0, 1e-12);
  EXPECT_NEAR(f.theta, 0.0, 1e-12);
  EXPECT_NEAR(f.d, 1.0, 1e-12);
}

TEST(PairFeature, ParallelNormalsPerpendicularLine) {
  const Eigen::Vector3d n = Eigen::Vector3d(1, 2, -0.5).normalized();
  const Eigen::Vector3d line = n.cross(Eigen::Vector3d(0, 1, 3)).normalized() * 0.37;
  const PairFeature f = darboux_pair({0.1, 0.2, 0.3}, n, Eigen::Vector3d(0.1, 0.2, 0.3) + line, n);
  EXPECT_NEAR(f.alpha, 0.0, 1e-12);
  EXPECT_NEAR(f.phi, 0.0, 1e-12);
}

TEST(PairFeature, SymmetricAndBoundedOnRandomPairs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector3d p1(g(rng), g(rng), g(rng)), p2(g(rng), g(rng), g(rng));
    const Eigen::Vector3d n1 = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const Eigen::Vector3d n2 = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const PairFeature a = darboux_pair(p1, n1, p2, n2), b = darboux_pair(p2, n2, p1, n1);
    EXPECT_EQ(a.alpha, b.alpha);
    EXPECT_EQ(a.phi, b.phi);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.d, b.d);
    EXPECT_GE(a.alpha, -1.0);
    EXPECT_LE(a.alpha, 1.0);
    EXPECT_GE(a.phi, -1.0);
    EXPECT_LE(a.phi, 1.0);
    EXPECT_GT(a.theta, -M_PI);
    EXPECT_LE(a.theta, M_PI);
    EXPECT_GT(a.d, 0.0);
  }
}

TEST(PairFeature, CoincidentPointsRejected) {
  EXPECT_THROW(darboux_pair({1, 1, 1}, {0, 0, 1}, {1, 1, 1}, {0, 1, 0}), InvalidArgument);
}

TEST(Descriptors, DimensionsAreFixed) {
  EXPECT_EQ(descriptor_dimension(DescriptorKind::pfh), 125u);
  EXPECT_EQ(descriptor_dimension(DescriptorKind::pfhrgb), 250u);
  EXPECT_EQ(descriptor_dimension(DescriptorKind::fpfh), 33u);
  EXPECT_EQ(descriptor_dimension(DescriptorKind::shot), 352u);
  EXPECT_EQ(descriptor_dimension(DescriptorKind::cshot), 1344u);
  EXPECT_EQ(descriptor_dimension(DescriptorKind::esf), 640u);
  EXPECT_THROW(parse_descriptor_kind("narf"), InvalidArgument);
}

TEST(Descriptors, EmittedVectorsHaveDeclaredDimensionAndCountDrops) {
  SceneSpec spec = default_scene_spec();
  spec.points_per_cloud = 3000;
  PointCloud raw = synthesize_cloud(spec, 2, 0);
  raw.push_back(Point3(50, 50, 50, Rgb{1, 2, 3}));
  const PointCloud c = estimate_normals(raw, 0.05);
  const KdTree index(c);
  KeypointSet k = uniform_sampling(c, 0.1);
  k.points.push_back(c[c.size() - 1]);
  k.source_indices.push_back(static_cast<std::int64_t>(c.size() - 1));
  const std::vector<std::pair<DescriptorKind, FeatureSet>> sets = {
      {DescriptorKind::pfh, compute_pfh(c, index, k)},       {DescriptorKind::pfhrgb, compute_pfhrgb(c, index, k)},
      {DescriptorKind::fpfh, compute_fpfh(c, index, k)},     {DescriptorKind::shot, compute_shot(c, index, k)},
      {DescriptorKind::cshot, compute_cshot(c, index, k)},
  };
  for (const auto& [kind, set] : sets) {
    SCOPED_TRACE(std::string(descriptor_name(kind)));
    EXPECT_EQ(set.kind, kind);
    EXPECT_EQ(set.kept() + set.dropped, k.size());
    EXPECT_GE(set.dropped, 1u);
    EXPECT_GT(set.kept(), k.size() / 2);
    for (std::size_t i = 0; i < set.size(); ++i) {
      ASSERT_EQ(set.vectors[i].size(), descriptor_dimension(kind));
      for (float v : set.vectors[i]) {
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_GE(v, 0.f);
      }
      if (i > 0) {
        EXPECT_LT(set.keypoint_ids[i - 1], set.keypoint_ids[i]);
      }
    }
  }
  const FeatureVector esf = compute_esf(c);
  EXPECT_EQ(esf.kind, DescriptorKind::esf);
  EXPECT_EQ(esf.dimension(), 640u);
}

TEST(Descriptors, ColorFeaturesRequireColor) {
  const PointCloud c = estimate_normals(plane_grid(5, 5, 0.01), 0.03);
  const KdTree index(c);
  const KeypointSet k = keypoints_at(c, {12});
  EXPECT_THROW(compute_pfhrgb(c, index, k), InvalidArgument);
  EXPECT_THROW(compute_cshot(c, index, k), InvalidArgument);
  EXPECT_THROW(compute_pfh(plane_grid(5, 5, 0.01), index, k), InvalidArgument);
  EXPECT_THROW(compute_pfh(c, index, k, 0.0), InvalidArgument);
}

TEST(Pfh, PlaneConcentratesInZeroAngleBin) {
  const Prepared p = prepare(plane_grid(20, 20, 0.01), 0.03, {210, 105, 300});
  const FeatureSet s = compute_pfh(p.cloud, p.index, p.keypoints, 0.04);
  ASSERT_EQ(s.kept(), 3u);
  // alpha = phi = theta = 0 falls in bin 2 of each five-bin axis.
  const std::size_t zero_bin = 2 + 5 * 2 + 25 * 2;
  for (const auto& v : s.vectors) {
    EXPECT_NEAR(v[zero_bin], 1.0, 1e-6);
    EXPECT_NEAR(sum_of(v, 0, v.size()), 1.0, kSumTol);
  }
}

TEST(Pfh, HistogramSumsToOne) {
  const Prepared p = prepare(curved_patch(20, 0.005), 0.02, patch_center_indices(20, 4));
  const FeatureSet s = compute_pfh(p.cloud, p.index, p.keypoints, 0.03);
  ASSERT_FALSE(s.empty());
  for (const auto& v : s.vectors) EXPECT_NEAR(sum_of(v, 0, 125), 1.0, kSumTol);
}

TEST(PfhRgb, GeometricHalfEqualsPfhAndUniformColorHitsMiddleBins) {
  const Prepared p = prepare(colored(curved_patch(20, 0.005), Rgb{120, 60, 0}), 0.02, patch_center_indices(20, 5));
  const FeatureSet geo = compute_pfh(p.cloud, p.index, p.keypoints, 0.03);
  const FeatureSet rgb = compute_pfhrgb(p.cloud, p.index, p.keypoints, 0.03);
  ASSERT_EQ(geo.size(), rgb.size());
  // Every ratio is 0.5 (channel b is 0 on both ends), which lands in bin 2 per channel.
  const std::size_t mid = 125 + 2 + 5 * 2 + 25 * 2;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    ASSERT_EQ(rgb.vectors[i].size(), 250u);
    EXPECT_TRUE(std::equal(geo.vectors[i].begin(), geo.vectors[i].end(), rgb.vectors[i].begin()));
    EXPECT_NEAR(rgb.vectors[i][mid], 1.0, 1e-6);
    EXPECT_NEAR(sum_of(rgb.vectors[i], 0, 125), 1.0, kSumTol);
    EXPECT_NEAR(sum_of(rgb.vectors[i], 125, 250), 1.0, kSumTol);
  }
}

TEST(PfhRgb, ColorRatioOfTwoBlacksIsHalf) {
  EXPECT_EQ(detail::color_ratio(0, 0), 0.5);
  EXPECT_EQ(detail::color_ratio(255, 0), 1.0);
  EXPECT_EQ(detail::color_ratio(10, 30), 0.25);
}

TEST(Fpfh, PlaneConcentratesInZeroAngleBins) {
  const Prepared p = prepare(plane_grid(20, 20, 0.01), 0.03, {210, 105});
  const FeatureSet s = compute_fpfh(p.cloud, p.index, p.keypoints, 0.04);
  ASSERT_EQ(s.kept(), 2u);
  for (const auto& v : s.vectors) {
    ASSERT_EQ(v.size(), 33u);
    // The zero value of each angle falls in bin 5 of 11.
    EXPECT_NEAR(v[5], 1.0, 1e-6);
    EXPECT_NEAR(v[11 + 5], 1.0, 1e-6);
    EXPECT_NEAR(v[22 + 5], 1.0, 1e-6);
  }
}

TEST(Fpfh, TwoPointCaseEqualsOwnSpfh) {
  PointCloud c({Point3(0, 0, 0), Point3(0.02f, 0.01f, 0.005f)});
  const Eigen::Vector3d n0 = Eigen::Vector3d(0.1, -0.2, 1).normalized(), n1 = Eigen::Vector3d(-0.3, 0.4, 1).normalized();
  std::vector<Normal3> normals(2);
  normals[0] = {float(n0.x()), float(n0.y()), float(n0.z()), 0.f};
  normals[1] = {float(n1.x()), float(n1.y()), float(n1.z()), 0.f};
  c.set_normals(normals);
  const KdTree index(c);
  const FeatureSet s = compute_fpfh(c, index, keypoints_at(c, {0}), 0.1);
  ASSERT_EQ(s.kept(), 1u);
  const auto spfh = detail::compute_spfh(c, index, 0, 0.1, 11);
  ASSERT_EQ(spfh.size(), 33u);
  const PairFeature f = darboux_pair(c[0].vec(), normals[0].vec(), c[1].vec(), normals[1].vec());
  std::vector<double> want(33, 0.0);
  want[detail::alpha_bin(f, 11)] = 1.0;
  want[11 + detail::phi_bin(f, 11)] = 1.0;
  want[22 + detail::theta_bin(f, 11)] = 1.0;
  for (std::size_t i = 0; i < 33; ++i) {
    EXPECT_NEAR(s.vectors[0][i], spfh[i], 1e-7);
    EXPECT_NEAR(s.vectors[0][i], want[i], 1e-7);
  }
}

TEST(Fpfh, SubHistogramsSumToOne) {
  const Prepared p = prepare(curved_patch(20, 0.005), 0.02, patch_center_indices(20, 4));
  const FeatureSet s = compute_fpfh(p.cloud, p.index, p.keypoints, 0.03);
  ASSERT_FALSE(s.empty());
  for (const auto& v : s.vectors)
    for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(sum_of(v, 11 * h, 11 * h + 11), 1.0, kSumTol);
}

TEST(Shot, PlaneMassOnlyInTopCosineBin) {
  const Prepared p = prepare(plane_grid(30, 30, 0.01), 0.03, {465, 430});
  const FeatureSet s = compute_shot(p.cloud, p.index, p.keypoints, 0.1);
  ASSERT_EQ(s.kept(), 2u);
  for (const auto& v : s.vectors) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      norm2 += double(v[i]) * v[i];
      if (i % 11 != 10) {
        EXPECT_EQ(v[i], 0.f) << "bin " << i;
      }
    }
    EXPECT_NEAR(std::sqrt(norm2), 1.0, kSumTol);
  }
}

TEST(Shot, CollinearSupportIsDropped) {
  PointCloud c;
  for (int i = 0; i < 20; ++i) c.push_back(Point3(float(i) * 0.01f, 0, 0));
  std::vector<Normal3> normals(c.size(), Normal3{0, 0, 1, 0});
  c.set_normals(normals);
  const KdTree index(c);
  const FeatureSet s = compute_shot(c, index, keypoints_at(c, {10}), 0.1);
  EXPECT_EQ(s.kept(), 0u);
  EXPECT_EQ(s.dropped, 1u);
}

TEST(Cshot, ShapeHalfEqualsShotAndUniformColorInFirstBin) {
  const Prepared p = prepare(colored(curved_patch(20, 0.005), Rgb{10, 200, 30}), 0.02, patch_center_indices(20, 5));
  const FeatureSet shot = compute_shot(p.cloud, p.index, p.keypoints, 0.06);
  const FeatureSet cshot = compute_cshot(p.cloud, p.index, p.keypoints, 0.06);
  ASSERT_EQ(shot.size(), cshot.size());
  ASSERT_FALSE(shot.empty());
  for (std::size_t i = 0; i < shot.size(); ++i) {
    const auto& v = cshot.vectors[i];
    ASSERT_EQ(v.size(), 1344u);
    EXPECT_TRUE(std::equal(shot.vectors[i].begin(), shot.vectors[i].end(), v.begin()));
    double n2 = 0.0;
    for (std::size_t j = 352; j < 1344; ++j) {
      n2 += double(v[j]) * v[j];
      if ((j - 352) % 31 != 0) {
        EXPECT_EQ(v[j], 0.f);
      }
    }
    EXPECT_NEAR(std::sqrt(n2), 1.0, kSumTol);
  }
}

TEST(Descriptors, ExactRigidMotionInvariance) {
  const int half = 20;
  const PointCloud base = dyadic_patch(half, 0.005);
  const auto ids = patch_center_indices(half, 3);
  const auto ref = invariance_descriptors(base, ids);
  const std::vector<Eigen::Vector3d> shifts = {{0.75, -1.5, 0.25}, {-2.0, 0.125, 1.0}, {3.0, 3.0, -0.5}};
  const auto rotations = axis_rotations();
  for (std::size_t m = 0; m < rotations.size(); ++m) {
    const auto moved = invariance_descriptors(transformed(base, rotations[m], shifts[m]), ids);
    for (std::size_t d = 0; d < ref.size(); ++d) {
      SCOPED_TRACE(std::string(descriptor_name(ref[d].kind)) + " motion " + std::to_string(m));
      ASSERT_FALSE(ref[d].empty());
      const DescriptorDiff diff = compare_sets(ref[d], moved[d], 1e-6);
      ASSERT_TRUE(diff.same_keypoints);
      EXPECT_LE(diff.max_abs, 1e-6);
    }
  }
}

// Under a general rotation the float coordinates of the moved cloud are
// rounded, which perturbs the SHOT frame slightly; a neighbor near a sector
// edge can then switch sectors. PFH and FPFH have no frame and stay within 1e-6.
TEST(Descriptors, GeneralRigidMotionInvariance) {
  const int half = 20;
  const PointCloud base = dyadic_patch(half, 0.005);
  const auto ids = patch_center_indices(half, 3);
  const auto ref = invariance_descriptors(base, ids);
  std::size_t shot_total = 0, shot_off = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto moved =
        invariance_descriptors(transformed(base, random_rotation(seed), {0.3 * double(seed), -0.7, 0.25}), ids);
    for (std::size_t d = 0; d < 2; ++d) {
      const DescriptorDiff diff = compare_sets(ref[d], moved[d], 1e-6);
      ASSERT_TRUE(diff.same_keypoints);
      EXPECT_LE(diff.max_abs, 1e-6) << descriptor_name(ref[d].kind) << " seed " << seed;
    }
    const DescriptorDiff shot = compare_sets(ref[2], moved[2], 1e-6);
    ASSERT_TRUE(shot.same_keypoints);
    shot_total += shot.descriptors;
    shot_off += shot.over_tol;
  }
  EXPECT_GE(static_cast<double>(shot_total - shot_off), 0.95 * static_cast<double>(shot_total));
}

TEST(Esf, SubHistogramsSumToOneAndSeedIsReproducible) {
  SceneSpec spec = default_scene_spec();
  spec.points_per_cloud = 3000;
  const PointCloud c = synthesize_cloud(spec, 0, 0);
  const FeatureVector a = compute_esf(c), b = compute_esf(c);
  EXPECT_EQ(a.values, b.values);
  for (std::size_t h = 0; h < 10; ++h) EXPECT_NEAR(sum_of(a.values, 64 * h, 64 * h + 64), 1.0, kSumTol);
  EsfConfig other;
  other.seed = 99;
  EXPECT_NE(compute_esf(c, other).values, a.values);
}

TEST(Esf, UniformScalingLeavesDescriptorUnchanged) {
  SceneSpec spec = default_scene_spec();
  spec.points_per_cloud = 3000;
  const PointCloud c = synthesize_cloud(spec, 1, 0);
  const FeatureVector a = compute_esf(c);
  // A power-of-two scale is exact in float, so the sampled geometry is identical.
  const FeatureVector b = compute_esf(transformed(c, 2.0 * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()));
  for (std::size_t i = 0; i < 640; ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-6);
  // Other scales perturb voxel boundaries slightly; the descriptor stays close.
  const FeatureVector d = compute_esf(transformed(c, 0.37 * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()));
  for (std::size_t h = 0; h < 10; ++h) {
    double l1 = 0.0;
    for (std::size_t i = 64 * h; i < 64 * h + 64; ++i) l1 += std::abs(a.values[i] - d.values[i]);
    EXPECT_LT(l1, 0.05) << "sub-histogram " << h;
  }
}

TEST(Esf, NeedsThreeDistinctPoints) {
  EXPECT_THROW(compute_esf(PointCloud({Point3(0, 0, 0), Point3(1, 0, 0)})), InvalidArgument);
  EXPECT_THROW(compute_esf(PointCloud({Point3(1, 1, 1), Point3(1, 1, 1), Point3(1, 1, 1)})), InvalidArgument);
}

TEST(FeatureIo, RoundTrip) {
  TempDir dir;
  const Prepared p = prepare(curved_patch(15, 0.005), 0.02, patch_center_indices(15, 3));
  FeatureSet s = compute_fpfh(p.cloud, p.index, p.keypoints, 0.03);
  s.dropped = 4;
  save_feature_set(s, dir.file("f.feats"));
  const FeatureSet back = load_feature_set(dir.file("f.feats"));
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.vectors, s.vectors);
  EXPECT_EQ(back.dropped, s.dropped);
  EXPECT_THROW(load_feature_set(dir.file("missing.feats")), DataError);
  write_text(dir.file("junk.feats"), "not a feature file");
  EXPECT_THROW(load_feature_set(dir.file("junk.feats")), DataError);
}

TEST(Descriptors, IndependentOfThreadCount) {
  const Prepared p = prepare(curved_patch(20, 0.005), 0.02, patch_center_indices(20, 2));
  set_thread_count(1);
  const FeatureSet a = compute_shot(p.cloud, p.index, p.keypoints, 0.05);
  const FeatureSet fa = compute_fpfh(p.cloud, p.index, p.keypoints, 0.03);
  set_thread_count(3);
  const FeatureSet b = compute_shot(p.cloud, p.index, p.keypoints, 0.05);
  const FeatureSet fb = compute_fpfh(p.cloud, p.index, p.keypoints, 0.03);
  set_thread_count(0);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(fa.vectors, fb.vectors);
}
