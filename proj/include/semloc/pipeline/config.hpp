// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration. Line-oriented text:
//
//   # comment
//   key = value
//   [training]
//   relative/or/absolute.pcd<TAB>label
//   [test]
//   ...
//
// Settings may appear before the first section or inside [settings].
// Keys (defaults in parentheses):
//   detector (uniform_sampling)        uniform_sampling | harris3d
//   feature (fpfh)                     pfh | pfhrgb | fpfh | shot | cshot | esf
//   classifier (svm)                   svm | knn
//   normal_radius (0.05)
//   cache_dir ()                       empty disables the feature cache
//   uniform_sampling.radius (0.03)
//   harris3d.support_radius (0.05)   harris3d.response_constant (0.04)
//   harris3d.threshold (0.01)        harris3d.nms_radius (0.05)
//   feature.radius (0)                 0 picks 0.06 for pfh/pfhrgb/fpfh, 0.10 for shot/cshot
//   esf.samples (20000)  esf.voxel_resolution (64)  esf.seed (1)
//   dictionary.k (50)  dictionary.seed (1)  dictionary.max_iters (100)  dictionary.tol (1e-4)
//   svm.kernel (chi_square)  svm.C (1)  svm.tol (1e-3)
//   svm.gamma (0)                      0 = 1/dimension; "mean" = 1/mean training distance
//   knn.k (7)  knn.distance (euclidean)
#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "semloc/bow/dictionary.hpp"
#include "semloc/classify/kernel.hpp"
#include "semloc/classify/knn.hpp"
#include "semloc/features/esf.hpp"
#include "semloc/features/feature_set.hpp"
#include "semloc/features/support.hpp"
#include "semloc/keypoints/harris3d.hpp"
#include "semloc/keypoints/uniform_sampling.hpp"

namespace semloc {

enum class DetectorKind { uniform_sampling, harris3d };
enum class ClassifierKind { svm, knn };

inline std::string_view detector_name(DetectorKind d) {
  return d == DetectorKind::uniform_sampling ? "uniform_sampling" : "harris3d";
}
inline DetectorKind parse_detector(std::string_view s) {
  if (s == "uniform_sampling") return DetectorKind::uniform_sampling;
  if (s == "harris3d") return DetectorKind::harris3d;
  throw InvalidArgument("unknown detector '" + std::string(s) + "' (supported: uniform_sampling, harris3d)");
}
inline std::string_view classifier_name(ClassifierKind c) { return c == ClassifierKind::svm ? "svm" : "knn"; }
inline ClassifierKind parse_classifier(std::string_view s) {
  if (s == "svm") return ClassifierKind::svm;
  if (s == "knn") return ClassifierKind::knn;
  throw InvalidArgument("unknown classifier '" + std::string(s) + "' (supported: svm, knn)");
}

struct CloudEntry {
  std::string path;
  std::string label;
  bool operator==(const CloudEntry&) const = default;
};

struct ExperimentConfig {
  std::vector<CloudEntry> training;
  std::vector<CloudEntry> test;

  DetectorKind detector = DetectorKind::uniform_sampling;
  double us_radius = kDefaultUniformSamplingRadius;
  HarrisConfig harris;

  DescriptorKind feature = DescriptorKind::fpfh;
  double feature_radius = 0.0;
  EsfConfig esf;

  double normal_radius = 0.05;

  std::size_t k = 50;
  std::uint64_t dictionary_seed = 1;
  KMeansOptions kmeans;

  ClassifierKind classifier = ClassifierKind::svm;
  KernelConfig svm_kernel;
  double svm_C = 1.0;
  double svm_tol = 1e-3;
  std::size_t knn_k = 7;
  KnnDistance knn_distance = KnnDistance::euclidean;

  std::string cache_dir;

  bool uses_dictionary() const { return feature != DescriptorKind::esf; }

  double effective_feature_radius() const {
    if (feature_radius > 0.0) return feature_radius;
    return feature == DescriptorKind::shot || feature == DescriptorKind::cshot ? kDefaultShotRadius
                                                                               : kDefaultPfhRadius;
  }

  /// Input dimension seen by the classifier.
  std::size_t classifier_dimension() const { return uses_dictionary() ? k : descriptor_dimension(feature); }

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
    };
    positive(normal_radius, "normal_radius");
    positive(us_radius, "uniform_sampling.radius");
    harris.validate();
    if (feature_radius < 0.0 || !std::isfinite(feature_radius))
      throw InvalidArgument("feature.radius must be non-negative");
    if (esf.samples == 0 || esf.voxel_resolution < 2) throw InvalidArgument("esf parameters out of range");
    if (k == 0) throw InvalidArgument("dictionary.k must be positive");
    if (kmeans.max_iters == 0) throw InvalidArgument("dictionary.max_iters must be positive");
    if (kmeans.tol < 0.0) throw InvalidArgument("dictionary.tol must be non-negative");
    positive(svm_C, "svm.C");
    positive(svm_tol, "svm.tol");
    if (svm_kernel.gamma < 0.0) throw InvalidArgument("svm.gamma must be non-negative");
    if (knn_k == 0) throw InvalidArgument("knn.k must be positive");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw InvalidArgument("config key '" + key + "': cannot parse '" + value + "' as a number");
  return out;
}

/// Ordered key/value view of every setting; one source of truth for
/// parsing, writing and fingerprinting.
inline std::vector<std::pair<std::string, std::string>> settings_of(const ExperimentConfig& c) {
  const auto d = format_double;
  return {
      {"detector", std::string(detector_name(c.detector))},
      {"feature", std::string(descriptor_name(c.feature))},
      {"classifier", std::string(classifier_name(c.classifier))},
      {"normal_radius", d(c.normal_radius)},
      {"uniform_sampling.radius", d(c.us_radius)},
      {"harris3d.support_radius", d(c.harris.support_radius)},
      {"harris3d.response_constant", d(c.harris.response_constant)},
      {"harris3d.threshold", d(c.harris.threshold)},
      {"harris3d.nms_radius", d(c.harris.nms_radius)},
      {"feature.radius", d(c.feature_radius)},
      {"esf.samples", std::to_string(c.esf.samples)},
      {"esf.voxel_resolution", std::to_string(c.esf.voxel_resolution)},
      {"esf.seed", std::to_string(c.esf.seed)},
      {"dictionary.k", std::to_string(c.k)},
      {"dictionary.seed", std::to_string(c.dictionary_seed)},
      {"dictionary.max_iters", std::to_string(c.kmeans.max_iters)},
      {"dictionary.tol", d(c.kmeans.tol)},
      {"svm.kernel", std::string(kernel_name(c.svm_kernel.type))},
      {"svm.C", d(c.svm_C)},
      {"svm.gamma", c.svm_kernel.gamma_from_mean ? std::string("mean") : d(c.svm_kernel.gamma)},
      {"svm.tol", d(c.svm_tol)},
      {"knn.k", std::to_string(c.knn_k)},
      {"knn.distance", std::string(knn_distance_name(c.knn_distance))},
  };
}

inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
  using detail::parse_number;
  if (key == "detector") c.detector = parse_detector(v);
  else if (key == "feature") c.feature = parse_descriptor_kind(v);
  else if (key == "classifier") c.classifier = parse_classifier(v);
  else if (key == "normal_radius") c.normal_radius = parse_number<double>(key, v);
  else if (key == "cache_dir") c.cache_dir = v;
  else if (key == "uniform_sampling.radius") c.us_radius = parse_number<double>(key, v);
  else if (key == "harris3d.support_radius") c.harris.support_radius = parse_number<double>(key, v);
  else if (key == "harris3d.response_constant") c.harris.response_constant = parse_number<double>(key, v);
  else if (key == "harris3d.threshold") c.harris.threshold = parse_number<double>(key, v);
  else if (key == "harris3d.nms_radius") c.harris.nms_radius = parse_number<double>(key, v);
  else if (key == "feature.radius") c.feature_radius = parse_number<double>(key, v);
  else if (key == "esf.samples") c.esf.samples = parse_number<std::size_t>(key, v);
  else if (key == "esf.voxel_resolution") c.esf.voxel_resolution = parse_number<std::size_t>(key, v);
  else if (key == "esf.seed") c.esf.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "dictionary.k") {
    if (!v.empty() && v[0] == '-') throw InvalidArgument("dictionary.k must be positive");
    c.k = parse_number<std::size_t>(key, v);
  } else if (key == "dictionary.seed") c.dictionary_seed = parse_number<std::uint64_t>(key, v);
  else if (key == "dictionary.max_iters") c.kmeans.max_iters = parse_number<std::size_t>(key, v);
  else if (key == "dictionary.tol") c.kmeans.tol = parse_number<double>(key, v);
  else if (key == "svm.kernel") c.svm_kernel.type = parse_kernel(v);
  else if (key == "svm.C") c.svm_C = parse_number<double>(key, v);
  else if (key == "svm.gamma") {
    c.svm_kernel.gamma_from_mean = v == "mean";
    c.svm_kernel.gamma = c.svm_kernel.gamma_from_mean ? 0.0 : parse_number<double>(key, v);
  }
  else if (key == "svm.tol") c.svm_tol = parse_number<double>(key, v);
  else if (key == "knn.k") c.knn_k = parse_number<std::size_t>(key, v);
  else if (key == "knn.distance") c.knn_distance = parse_knn_distance(v);
  else throw InvalidArgument("unknown config key '" + key + "'");
}

}  // namespace detail

/// Applies one `key = value` override (same keys as the file format).
inline void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  detail::apply_setting(config, key, value);
}

/// Parses configuration text. Relative cloud paths resolve against base_dir.
/// When check_files is set, every listed cloud must exist.
inline ExperimentConfig parse_configuration(std::istream& in, const std::filesystem::path& base_dir,
                                           bool check_files = true, const std::string& origin = "config") {
  ExperimentConfig c;
  enum class Section { settings, training, test } section = Section::settings;
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t == "[training]") section = Section::training;
      else if (t == "[test]") section = Section::test;
      else if (t == "[settings]") section = Section::settings;
      else throw InvalidArgument(where() + "unknown section " + t);
      continue;
    }
    if (section == Section::settings) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw InvalidArgument(where() + "expected 'key = value'");
      const std::string key = detail::trim(t.substr(0, eq));
      const std::string value = detail::trim(t.substr(eq + 1));
      try {
        detail::apply_setting(c, key, value);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(where() + e.what());
      }
      continue;
    }
    // path<TAB>label; a run of spaces is accepted when no tab is present.
    auto sep = t.rfind('\t');
    if (sep == std::string::npos) sep = t.find_last_of(' ');
    if (sep == std::string::npos) throw InvalidArgument(where() + "expected 'path<TAB>label'");
    CloudEntry e{detail::trim(t.substr(0, sep)), detail::trim(t.substr(sep + 1))};
    if (e.path.empty() || e.label.empty()) throw InvalidArgument(where() + "expected 'path<TAB>label'");
    std::filesystem::path p(e.path);
    if (p.is_relative()) p = base_dir / p;
    e.path = p.lexically_normal().string();
    if (check_files && !std::filesystem::exists(e.path)) throw DataError(where() + "cloud file not found: " + e.path);
    (section == Section::training ? c.training : c.test).push_back(std::move(e));
  }
  c.validate();
  return c;
}

inline ExperimentConfig read_configuration(const std::string& path, bool check_files = true) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open configuration");
  const auto base = std::filesystem::absolute(path).parent_path();
  return parse_configuration(in, base, check_files, path);
}

/// Serializes settings and cloud lists. Paths are written relative to
/// base_dir when given, else as stored.
inline std::string format_configuration(const ExperimentConfig& c, const std::filesystem::path& base_dir = {}) {
  std::ostringstream os;
  for (const auto& [k, v] : detail::settings_of(c)) os << k << " = " << v << "\n";
  if (!c.cache_dir.empty()) os << "cache_dir = " << c.cache_dir << "\n";
  auto write_list = [&](const char* name, const std::vector<CloudEntry>& list) {
    os << "\n[" << name << "]\n";
    for (const auto& e : list) {
      std::string p = e.path;
      if (!base_dir.empty()) p = std::filesystem::path(e.path).lexically_relative(base_dir).string();
      os << p << "\t" << e.label << "\n";
    }
  };
  write_list("training", c.training);
  write_list("test", c.test);
  return os.str();
}

/// Canonical text of the per-cloud stage parameters (normals, detector, feature).
inline std::string extraction_signature(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "normal_radius=" << detail::format_double(c.normal_radius) << ";feature=" << descriptor_name(c.feature);
  if (c.feature == DescriptorKind::esf) {
    os << ";esf=" << c.esf.samples << "," << c.esf.voxel_resolution << "," << c.esf.seed;
    return os.str();
  }
  os << ";feature.radius=" << detail::format_double(c.effective_feature_radius())
     << ";detector=" << detector_name(c.detector);
  if (c.detector == DetectorKind::uniform_sampling) {
    os << ";radius=" << detail::format_double(c.us_radius);
  } else {
    os << ";harris=" << detail::format_double(c.harris.support_radius) << ","
       << detail::format_double(c.harris.response_constant) << "," << detail::format_double(c.harris.threshold)
       << "," << detail::format_double(c.harris.nms_radius);
  }
  return os.str();
}

/// Hash of every setting that influences how a frame is turned into a label.
inline std::string config_fingerprint(const ExperimentConfig& c) {
  std::string canon;
  for (const auto& [k, v] : detail::settings_of(c)) canon += k + "=" + v + "\n";
  return to_hex(fnv1a(canon));
}

}  // namespace semloc
