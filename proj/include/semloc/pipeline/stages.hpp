// SPDX-License-Identifier: Apache-2.0
//
// Per-cloud chain: load -> normals -> detect -> extract. Results may be
// cached on disk under a key derived from the cloud file bytes and the
// extraction parameters.
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "semloc/cloud/normals.hpp"
#include "semloc/cloud/pcd_io.hpp"
#include "semloc/features/esf.hpp"
#include "semloc/features/feature_io.hpp"
#include "semloc/features/fpfh.hpp"
#include "semloc/features/pfh.hpp"
#include "semloc/features/shot.hpp"
#include "semloc/keypoints/harris3d.hpp"
#include "semloc/keypoints/uniform_sampling.hpp"
#include "semloc/pipeline/config.hpp"

namespace semloc {

/// Rethrows `e` as the same error class with the stage and cloud prepended.
[[noreturn]] inline void rethrow_annotated(const std::exception& e, const std::string& cloud, const char* stage) {
  const std::string msg = cloud + ": " + stage + ": " + e.what();
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::usage: throw InvalidArgument(msg);
      case ErrorKind::data: throw DataError(msg);
      case ErrorKind::numeric: throw NumericError(msg);
    }
  }
  throw DataError(msg);
}

struct StageTiming {
  double load = 0, normals = 0, detect = 0, extract = 0;
  double total() const { return load + normals + detect + extract; }
  StageTiming& operator+=(const StageTiming& o) {
    load += o.load, normals += o.normals, detect += o.detect, extract += o.extract;
    return *this;
  }
};

struct CloudFeatures {
  FeatureSet features;
  std::size_t keypoints = 0;
  std::size_t invalid_normals = 0;
  std::size_t dropped_points = 0;  ///< NaN rows skipped while loading
  bool cache_hit = false;
  StageTiming timing;
};

namespace detail {

class StageClock {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline FeatureSet run_extractor(const ExperimentConfig& c, const PointCloud& cloud, const KdTree& index,
                                const KeypointSet& kps) {
  const double r = c.effective_feature_radius();
  switch (c.feature) {
    case DescriptorKind::pfh: return compute_pfh(cloud, index, kps, r);
    case DescriptorKind::pfhrgb: return compute_pfhrgb(cloud, index, kps, r);
    case DescriptorKind::fpfh: return compute_fpfh(cloud, index, kps, r);
    case DescriptorKind::shot: return compute_shot(cloud, index, kps, r);
    case DescriptorKind::cshot: return compute_cshot(cloud, index, kps, r);
    case DescriptorKind::esf: break;
  }
  throw InvalidArgument("run_extractor: esf is a global descriptor");
}

}  // namespace detail

/// Runs normals -> detect -> extract on an in-memory cloud. `name` labels errors.
inline CloudFeatures extract_cloud_features(const PointCloud& cloud, const ExperimentConfig& c,
                                            const std::string& name = "<cloud>") {
  CloudFeatures out;
  detail::StageClock clock;
  if (c.feature == DescriptorKind::esf) {
    FeatureSet set(DescriptorKind::esf);
    try {
      set.add(0, compute_esf(cloud, c.esf).values);
    } catch (const std::exception& e) {
      rethrow_annotated(e, name, "extract");
    }
    set.source = name;
    out.features = std::move(set);
    out.timing.extract = clock.lap();
    return out;
  }
  if (descriptor_needs_color(c.feature) && !cloud.has_color())
    throw DataError(name + ": extract: " + std::string(descriptor_name(c.feature)) + " needs a colored cloud");

  PointCloud with_normals;
  std::optional<KdTree> index;
  try {
    index.emplace(cloud);
    with_normals = estimate_normals(cloud, *index, c.normal_radius);
  } catch (const std::exception& e) {
    rethrow_annotated(e, name, "normals");
  }
  out.invalid_normals = with_normals.size() - with_normals.count_valid_normals();
  out.timing.normals = clock.lap();

  KeypointSet kps;
  try {
    kps = c.detector == DetectorKind::uniform_sampling ? uniform_sampling(with_normals, c.us_radius)
                                                       : harris3d(with_normals, *index, c.harris);
  } catch (const std::exception& e) {
    rethrow_annotated(e, name, "detect");
  }
  out.keypoints = kps.size();
  out.timing.detect = clock.lap();

  try {
    out.features = kps.size() ? detail::run_extractor(c, with_normals, *index, kps) : FeatureSet(c.feature);
  } catch (const std::exception& e) {
    rethrow_annotated(e, name, "extract");
  }
  out.features.source = name;
  out.timing.extract = clock.lap();
  return out;
}

/// Cache file for a cloud under the current extraction parameters.
inline std::string feature_cache_path(const ExperimentConfig& c, const std::string& cloud_path) {
  std::ifstream is(cloud_path, std::ios::binary);
  if (!is) throw DataError(cloud_path + ": load: cannot open");
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const std::uint64_t h = fnv1a(extraction_signature(c), fnv1a(bytes));
  return (std::filesystem::path(c.cache_dir) / (to_hex(h) + ".feats")).string();
}

/// Loads a cloud file and extracts its features, consulting the cache when
/// c.cache_dir is set.
inline CloudFeatures process_cloud_file(const std::string& path, const ExperimentConfig& c) {
  std::string cache_file;
  if (!c.cache_dir.empty()) {
    cache_file = feature_cache_path(c, path);
    if (std::filesystem::exists(cache_file)) {
      detail::StageClock clock;
      try {
        CloudFeatures out;
        out.features = load_feature_set(cache_file);
        if (out.features.kind == c.feature) {
          out.features.source = path;
          out.cache_hit = true;
          out.keypoints = out.features.size() + out.features.dropped;
          out.timing.load = clock.lap();
          return out;
        }
      } catch (const DataError&) {
        // unreadable cache entries are recomputed
      }
    }
  }
  detail::StageClock clock;
  PointCloud cloud;
  PcdLoadInfo info;
  try {
    cloud = load_pcd(path, &info);
  } catch (const std::exception& e) {
    rethrow_annotated(e, path, "load");
  }
  const double load_time = clock.lap();
  CloudFeatures out = extract_cloud_features(cloud, c, path);
  out.timing.load = load_time;
  out.dropped_points = info.dropped_invalid;
  if (!cache_file.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(c.cache_dir, ec);
    // Write then rename so concurrent readers never see a partial file.
    const std::string tmp = cache_file + ".tmp" + std::to_string(std::hash<std::string>{}(path));
    save_feature_set(out.features, tmp);
    std::filesystem::rename(tmp, cache_file, ec);
    if (ec) throw DataError(cache_file + ": cannot store cache entry: " + ec.message());
  }
  return out;
}

}  // namespace semloc
