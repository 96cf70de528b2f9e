// SPDX-License-Identifier: Apache-2.0
//
// Seeded desk-scale scene generator. Each category is a composition of
// colored primitives; every cloud jitters primitive sizes and positions,
// applies a random yaw and horizontal shift, then adds Gaussian noise.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "semloc/cloud/pcd_io.hpp"
#include "semloc/pipeline/config.hpp"

namespace semloc {

enum class PrimitiveType { rectangle, box, sphere, cylinder };

/// A surface patch in scene coordinates (z up, floor at z = 0).
///  rectangle: corner `a`, edge vectors `u`, `v`
///  box:       center `a`, half extents `u`; bottom face omitted
///  sphere:    center `a`, radius u.x()
///  cylinder:  base center `a`, radius u.x(), height u.y(); lateral surface plus top cap
struct Primitive {
  PrimitiveType type = PrimitiveType::rectangle;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Rgb color;
  /// Whether per-cloud jitter may scale and move this primitive.
  bool rigid = false;

  double area() const {
    switch (type) {
      case PrimitiveType::rectangle: return u.cross(v).norm();
      case PrimitiveType::box:
        return 4.0 * (u.x() * u.y()) + 8.0 * (u.x() * u.z() + u.y() * u.z());
      case PrimitiveType::sphere: return 4.0 * std::numbers::pi * u.x() * u.x();
      case PrimitiveType::cylinder: return 2.0 * std::numbers::pi * u.x() * u.y() + std::numbers::pi * u.x() * u.x();
    }
    return 0.0;
  }
};

struct CategoryArchetype {
  std::string name;
  std::vector<Primitive> primitives;
};

struct SceneSpec {
  std::vector<CategoryArchetype> categories;
  double noise_sigma = 0.002;
  std::size_t points_per_cloud = 4000;
  std::size_t clouds_per_category = 50;
  std::uint64_t seed = 1;
  /// Leading fraction of each category's clouds listed under [training].
  double train_fraction = 0.6;
  /// Relative size and position jitter applied per cloud.
  double size_jitter = 0.1;
  double position_jitter = 0.03;
  /// Random yaw and horizontal shift per cloud.
  bool random_pose = true;
  /// Up to this many clutter objects (shared by all categories) per cloud.
  std::size_t max_distractors = 0;
  PcdEncoding encoding = PcdEncoding::binary;

  void validate() const {
    if (categories.size() < 2) throw InvalidArgument("scene spec: at least two categories are required");
    if (!(noise_sigma >= 0.0)) throw InvalidArgument("scene spec: noise sigma must be >= 0");
    if (points_per_cloud == 0 || clouds_per_category == 0)
      throw InvalidArgument("scene spec: points and clouds per category must be positive");
    if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
      throw InvalidArgument("scene spec: train fraction must lie in [0, 1]");
    for (const auto& c : categories) {
      if (c.name.empty() || c.primitives.empty())
        throw InvalidArgument("scene spec: every category needs a name and primitives");
      for (const auto& p : c.primitives)
        if (!(p.area() > 0.0)) throw InvalidArgument("scene spec: primitive with zero area in " + c.name);
    }
  }
};

namespace synth {

inline Primitive rect(Eigen::Vector3d a, Eigen::Vector3d u, Eigen::Vector3d v, Rgb c, bool rigid = true) {
  return {PrimitiveType::rectangle, a, u, v, c, rigid};
}
inline Primitive box(Eigen::Vector3d center, Eigen::Vector3d half, Rgb c) {
  return {PrimitiveType::box, center, half, {}, c, false};
}
inline Primitive sphere(Eigen::Vector3d center, double r, Rgb c) {
  return {PrimitiveType::sphere, center, {r, 0, 0}, {}, c, false};
}
inline Primitive cylinder(Eigen::Vector3d base, double r, double h, Rgb c) {
  return {PrimitiveType::cylinder, base, {r, h, 0}, {}, c, false};
}
inline Primitive floor(double sx, double sy, Rgb c) {
  return rect({-sx / 2, -sy / 2, 0}, {sx, 0, 0}, {0, sy, 0}, c);
}

}  // namespace synth

/// Five room-like archetypes named after typical indoor categories.
inline SceneSpec default_scene_spec() {
  using namespace synth;
  using V = Eigen::Vector3d;
  SceneSpec s;
  const Rgb grey{128, 128, 128};
  s.categories = {
      {"corridor",
       {floor(1.0, 0.4, grey), rect({-0.5, -0.2, 0}, {1.0, 0, 0}, {0, 0, 0.3}, {200, 200, 180}),
        rect({-0.5, 0.2, 0}, {1.0, 0, 0}, {0, 0, 0.3}, {200, 200, 180})}},
      {"hall",
       {floor(0.9, 0.9, {150, 120, 90}), cylinder(V(-0.2, 0.15, 0), 0.06, 0.35, {230, 230, 230}),
        cylinder(V(0.25, -0.2, 0), 0.06, 0.35, {230, 230, 230})}},
      {"professor_office",
       {floor(0.8, 0.8, {90, 60, 40}), box(V(0.0, 0.1, 0.1), V(0.22, 0.12, 0.1), {120, 80, 50}),
        sphere(V(0.1, 0.1, 0.28), 0.07, {40, 90, 200})}},
      {"student_office",
       {floor(0.8, 0.8, {160, 160, 170}), box(V(-0.2, -0.2, 0.05), V(0.05, 0.05, 0.05), {250, 200, 40}),
        box(V(0.2, -0.18, 0.05), V(0.05, 0.05, 0.05), {250, 200, 40}),
        box(V(-0.18, 0.22, 0.05), V(0.05, 0.05, 0.05), {250, 200, 40}),
        box(V(0.2, 0.2, 0.05), V(0.05, 0.05, 0.05), {250, 200, 40})}},
      {"toilet",
       {floor(0.6, 0.6, {240, 240, 250}), rect({-0.3, 0.3, 0}, {0.6, 0, 0}, {0, 0, 0.4}, {220, 240, 250}),
        sphere(V(0.0, 0.05, 0.12), 0.12, {255, 255, 255}), cylinder(V(0.2, -0.15, 0), 0.04, 0.2, {200, 200, 200})}},
  };
  return s;
}

namespace detail {

inline Eigen::Vector3d sample_primitive(const Primitive& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  switch (p.type) {
    case PrimitiveType::rectangle: return p.a + U(rng) * p.u + U(rng) * p.v;
    case PrimitiveType::box: {
      const double hx = p.u.x(), hy = p.u.y(), hz = p.u.z();
      const double top = 4 * hx * hy, xface = 4 * hy * hz, yface = 4 * hx * hz;
      const double pick = U(rng) * (top + 2 * xface + 2 * yface);
      const double s = 2 * U(rng) - 1, t = 2 * U(rng) - 1;
      if (pick < top) return p.a + Eigen::Vector3d(s * hx, t * hy, hz);
      if (pick < top + xface) return p.a + Eigen::Vector3d(hx, s * hy, t * hz);
      if (pick < top + 2 * xface) return p.a + Eigen::Vector3d(-hx, s * hy, t * hz);
      if (pick < top + 2 * xface + yface) return p.a + Eigen::Vector3d(s * hx, hy, t * hz);
      return p.a + Eigen::Vector3d(s * hx, -hy, t * hz);
    }
    case PrimitiveType::sphere: {
      // Archimedes: z uniform in [-1, 1] gives uniform area density.
      const double z = 2 * U(rng) - 1, phi = 2 * std::numbers::pi * U(rng);
      const double r = std::sqrt(std::max(0.0, 1 - z * z));
      return p.a + p.u.x() * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
    }
    case PrimitiveType::cylinder: {
      const double rad = p.u.x(), h = p.u.y();
      const double lateral = 2 * std::numbers::pi * rad * h, cap = std::numbers::pi * rad * rad;
      const double phi = 2 * std::numbers::pi * U(rng);
      if (U(rng) * (lateral + cap) < lateral)
        return p.a + Eigen::Vector3d(rad * std::cos(phi), rad * std::sin(phi), h * U(rng));
      const double rr = rad * std::sqrt(U(rng));
      return p.a + Eigen::Vector3d(rr * std::cos(phi), rr * std::sin(phi), h);
    }
  }
  return p.a;
}

inline Primitive jitter_primitive(Primitive p, double size_jitter, double position_jitter, std::mt19937_64& rng) {
  if (p.rigid) return p;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double scale = 1.0 + size_jitter * U(rng);
  const Eigen::Vector3d shift(position_jitter * U(rng), position_jitter * U(rng), 0.0);
  switch (p.type) {
    case PrimitiveType::box:
      p.u *= scale;
      p.a.z() *= scale;  // a box resting on the floor keeps resting on it
      p.a += shift;
      break;
    case PrimitiveType::sphere:
      p.a.z() *= scale;
      p.u.x() *= scale;
      p.a += shift;
      break;
    case PrimitiveType::cylinder:
      p.u.x() *= scale;
      p.u.y() *= scale;
      p.a += shift;
      break;
    case PrimitiveType::rectangle: break;
  }
  return p;
}

/// Small clutter object placed anywhere in a 0.6 m square around the origin.
inline Primitive random_distractor(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Eigen::Vector3d at(0.6 * U(rng) - 0.3, 0.6 * U(rng) - 0.3, 0.0);
  const Rgb color{static_cast<std::uint8_t>(U(rng) * 255), static_cast<std::uint8_t>(U(rng) * 255),
                  static_cast<std::uint8_t>(U(rng) * 255)};
  const double size = 0.03 + 0.05 * U(rng);
  switch (static_cast<int>(U(rng) * 3.0)) {
    case 0: return synth::box(at + Eigen::Vector3d(0, 0, size), Eigen::Vector3d(size, size, size), color);
    case 1: return synth::sphere(at + Eigen::Vector3d(0, 0, size), size, color);
    default: return synth::cylinder(at, size, 2.0 * size, color);
  }
}

}  // namespace detail

/// Draws one cloud of a category. Deterministic in (spec.seed, category, index).
inline PointCloud synthesize_cloud(const SceneSpec& spec, std::size_t category, std::size_t index) {
  const auto& arch = spec.categories.at(category);
  std::seed_seq seq{static_cast<std::uint64_t>(spec.seed), static_cast<std::uint64_t>(category),
                    static_cast<std::uint64_t>(index)};
  std::mt19937_64 rng(seq);

  std::vector<Primitive> prims;
  for (const auto& p : arch.primitives)
    prims.push_back(detail::jitter_primitive(p, spec.size_jitter, spec.position_jitter, rng));

  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (spec.max_distractors > 0) {
    const auto count = static_cast<std::size_t>(U(rng) * static_cast<double>(spec.max_distractors + 1));
    for (std::size_t d = 0; d < std::min(count, spec.max_distractors); ++d)
      prims.push_back(detail::random_distractor(rng));
  }
  const double yaw = spec.random_pose ? 2 * std::numbers::pi * U(rng) : 0.0;
  const Eigen::Vector3d shift = spec.random_pose ? Eigen::Vector3d(0.4 * U(rng) - 0.2, 0.4 * U(rng) - 0.2, 0.0)
                                                 : Eigen::Vector3d::Zero();
  const Eigen::Matrix3d R = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();

  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& p : prims) cumulative.push_back(total += p.area());

  std::normal_distribution<double> noise(0.0, 1.0);
  PointCloud cloud;
  cloud.set_has_color(true);
  cloud.set_label(arch.name);
  for (std::size_t i = 0; i < spec.points_per_cloud; ++i) {
    const double pick = U(rng) * total;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                             cumulative.begin());
    k = std::min(k, prims.size() - 1);
    Eigen::Vector3d x = R * detail::sample_primitive(prims[k], rng) + shift;
    if (spec.noise_sigma > 0.0)
      x += spec.noise_sigma * Eigen::Vector3d(noise(rng), noise(rng), noise(rng));
    Point3 pt = Point3::from(x);
    pt.color = prims[k].color;
    cloud.push_back(pt);
  }
  cloud.set_viewpoint(Point3::from(R * Eigen::Vector3d(0.0, -1.5, 1.2) + shift));
  return cloud;
}

struct SyntheticDataset {
  std::string manifest;
  std::vector<CloudEntry> training;
  std::vector<CloudEntry> test;
};

/// Writes <out_dir>/<category>_<nnn>.pcd for every cloud plus
/// <out_dir>/manifest.cfg listing them under [training] and [test].
inline SyntheticDataset generate_synthetic_dataset(const SceneSpec& spec, const std::string& out_dir) {
  spec.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw DataError(out_dir + ": cannot create output directory");
  const fs::path dir = fs::absolute(out_dir).lexically_normal();

  SyntheticDataset out;
  const std::size_t n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(spec.clouds_per_category)));
  std::vector<std::vector<CloudEntry>> per_category(spec.categories.size());
  parallel_for(spec.categories.size() * spec.clouds_per_category, [&](std::size_t job) {
    const std::size_t c = job / spec.clouds_per_category, i = job % spec.clouds_per_category;
    char name[32];
    std::snprintf(name, sizeof name, "_%03zu.pcd", i);
    const fs::path file = dir / (spec.categories[c].name + name);
    save_pcd(synthesize_cloud(spec, c, i), file.string(), spec.encoding);
  });
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    for (std::size_t i = 0; i < spec.clouds_per_category; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "_%03zu.pcd", i);
      CloudEntry e{(dir / (spec.categories[c].name + name)).string(), spec.categories[c].name};
      (i < n_train ? out.training : out.test).push_back(std::move(e));
    }
  }
  ExperimentConfig manifest;
  manifest.training = out.training;
  manifest.test = out.test;
  out.manifest = (dir / "manifest.cfg").string();
  std::ofstream os(out.manifest);
  if (!os) throw DataError(out.manifest + ": cannot write manifest");
  os << "# synthetic scenes: seed " << spec.seed << ", " << spec.categories.size() << " categories x "
     << spec.clouds_per_category << " clouds, noise " << detail::format_double(spec.noise_sigma) << "\n";
  os << "[training]\n";
  for (const auto& e : out.training) os << fs::path(e.path).filename().string() << "\t" << e.label << "\n";
  os << "[test]\n";
  for (const auto& e : out.test) os << fs::path(e.path).filename().string() << "\t" << e.label << "\n";
  if (!os) throw DataError(out.manifest + ": write failed");
  return out;
}

}  // namespace semloc
