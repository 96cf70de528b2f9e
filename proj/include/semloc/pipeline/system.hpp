// SPDX-License-Identifier: Apache-2.0
//
// Train / classify / test / validate over an ExperimentConfig.
#pragma once

#include <set>
#include <variant>

#include "semloc/bow/bow_descriptor.hpp"
#include "semloc/bow/dictionary_io.hpp"
#include "semloc/classify/evaluation.hpp"
#include "semloc/classify/model_io.hpp"
#include "semloc/pipeline/stages.hpp"

namespace semloc {

struct TrainedSystem {
  ExperimentConfig config;
  std::string fingerprint;  ///< config_fingerprint(config) at training time
  std::vector<std::string> categories;
  std::optional<Dictionary> dictionary;  ///< absent for esf
  std::variant<SvmModel, KnnModel> model;

  std::size_t input_dimension() const { return config.classifier_dimension(); }
};

struct PipelineStats {
  std::size_t clouds = 0;
  std::size_t keypoints = 0;
  std::size_t features = 0;
  std::size_t dropped_features = 0;  ///< keypoints whose descriptor was undefined
  std::size_t dropped_points = 0;    ///< NaN rows skipped while loading
  std::size_t empty_clouds = 0;      ///< clouds described by the flagged empty histogram
  std::size_t cache_hits = 0;
  StageTiming stages;                ///< summed over clouds
  double extraction_seconds = 0;     ///< wall time of the per-cloud phase
  double dictionary_seconds = 0;
  double classifier_seconds = 0;
  double classify_seconds = 0;

  void absorb(const CloudFeatures& f) {
    ++clouds;
    keypoints += f.keypoints;
    features += f.features.size();
    dropped_features += f.features.dropped;
    dropped_points += f.dropped_points;
    cache_hits += f.cache_hit ? 1 : 0;
    stages += f.timing;
  }
};

struct FrameResult {
  std::size_t label = 0;
  std::string category;
  std::vector<double> scores;  ///< aligned with TrainedSystem::categories
  bool empty = false;          ///< no features: classified from the zero histogram
  std::string warning;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Extracts features for every entry concurrently; output order follows input.
inline std::vector<CloudFeatures> extract_all(const std::vector<CloudEntry>& entries, const ExperimentConfig& c,
                                              PipelineStats* stats = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CloudFeatures> out(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) { out[i] = process_cloud_file(entries[i].path, c); });
  if (stats) {
    for (const auto& f : out) stats->absorb(f);
    stats->extraction_seconds += detail::seconds_since(t0);
  }
  return out;
}

/// Fixed-length classifier input for one cloud's features. Sets `empty` when
/// the cloud produced no local features.
inline std::vector<double> describe_features(const TrainedSystem& system, const FeatureSet& features,
                                             bool* empty = nullptr) {
  std::vector<double> x;
  bool is_empty = false;
  if (system.dictionary) {
    BoWDescriptor bow = compute_bow_descriptor(*system.dictionary, features);
    x = std::move(bow.histogram);
    is_empty = bow.empty;
  } else {
    if (features.size() != 1) throw DataError(features.source + ": describe: expected one global descriptor");
    x.assign(features.vectors[0].begin(), features.vectors[0].end());
  }
  if (x.size() != system.input_dimension())
    throw NumericError(features.source + ": describe: descriptor length " + std::to_string(x.size()) +
                       " differs from classifier input " + std::to_string(system.input_dimension()));
  if (empty) *empty = is_empty;
  return x;
}

inline Prediction classify_descriptor(const TrainedSystem& system, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SvmModel>)
          return svm_classify(m, x);
        else
          return knn_classify(m, x);
      },
      system.model);
}

/// Trains the configured classifier on ready descriptors. `dictionary` must
/// be present exactly when the feature uses one.
inline TrainedSystem fit_descriptors(const ExperimentConfig& c, const std::vector<std::string>& labels,
                                     std::vector<std::vector<double>> descriptors, std::optional<Dictionary> dictionary,
                                     PipelineStats* stats = nullptr) {
  if (labels.size() != descriptors.size()) throw InvalidArgument("train: labels and descriptors differ in length");
  if (labels.empty()) throw InvalidArgument("train: the training list is empty");
  if (dictionary.has_value() != c.uses_dictionary())
    throw InvalidArgument(c.uses_dictionary() ? "train: a dictionary is required" : "train: esf takes no dictionary");
  if (dictionary && (dictionary->kind != c.feature || dictionary->k() != c.k))
    throw InvalidArgument("train: dictionary (" + std::string(descriptor_name(dictionary->kind)) + ", k = " +
                          std::to_string(dictionary->k()) + ") does not match the configuration");
  TrainedSystem sys;
  sys.config = c;
  sys.fingerprint = config_fingerprint(c);
  const std::set<std::string> distinct(labels.begin(), labels.end());
  sys.categories.assign(distinct.begin(), distinct.end());
  if (sys.categories.size() < 2) throw InvalidArgument("train: at least two distinct labels are required");
  sys.dictionary = std::move(dictionary);

  LabeledDataset data;
  data.categories = sys.categories;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (descriptors[i].size() != sys.input_dimension())
      throw NumericError("train: descriptor length " + std::to_string(descriptors[i].size()) +
                         " differs from classifier input " + std::to_string(sys.input_dimension()));
    data.add(std::move(descriptors[i]), data.category_index(labels[i]));
  }
  const auto t0 = std::chrono::steady_clock::now();
  if (c.classifier == ClassifierKind::svm)
    sys.model = svm_train(data, c.svm_kernel, c.svm_C, c.svm_tol);
  else
    sys.model = knn_train(std::move(data), c.knn_k, c.knn_distance);
  if (stats) stats->classifier_seconds += detail::seconds_since(t0);
  return sys;
}

/// Clusters the training features into the configured dictionary.
inline Dictionary build_training_dictionary(const ExperimentConfig& c, const std::vector<FeatureSet>& features,
                                            PipelineStats* stats = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t total = 0;
  for (const auto& f : features) total += f.size();
  if (total < c.k)
    throw DataError("train: build_dictionary: " + std::to_string(total) + " training features for k = " +
                    std::to_string(c.k));
  Dictionary dict = build_dictionary(features, c.k, c.dictionary_seed, c.kmeans);
  if (stats) stats->dictionary_seconds += detail::seconds_since(t0);
  return dict;
}

/// BoW (or global) descriptors of feature sets under a dictionary.
inline std::vector<std::vector<double>> describe_all(const ExperimentConfig& c, const std::optional<Dictionary>& dict,
                                                     const std::vector<FeatureSet>& features,
                                                     PipelineStats* stats = nullptr) {
  TrainedSystem probe;
  probe.config = c;
  probe.dictionary = dict;
  std::vector<std::vector<double>> out(features.size());
  std::vector<char> empty(features.size(), 0);
  parallel_for(features.size(), [&](std::size_t i) {
    bool e = false;
    out[i] = describe_features(probe, features[i], &e);
    empty[i] = e;
  });
  if (stats) stats->empty_clouds += static_cast<std::size_t>(std::count(empty.begin(), empty.end(), 1));
  return out;
}

/// Builds the dictionary (unless esf, or one is supplied) from the given
/// training features only, then trains the configured classifier.
inline TrainedSystem fit_system(const ExperimentConfig& c, const std::vector<std::string>& labels,
                                const std::vector<FeatureSet>& features, PipelineStats* stats = nullptr,
                                const Dictionary* prebuilt = nullptr) {
  if (labels.size() != features.size()) throw InvalidArgument("fit_system: labels and features differ in length");
  if (labels.empty()) throw InvalidArgument("train: the training list is empty");
  std::optional<Dictionary> dict;
  if (c.uses_dictionary()) dict = prebuilt ? *prebuilt : build_training_dictionary(c, features, stats);
  auto descriptors = describe_all(c, dict, features, stats);
  return fit_descriptors(c, labels, std::move(descriptors), std::move(dict), stats);
}

/// load -> normals -> detect -> extract -> dictionary -> BoW -> classifier.
inline TrainedSystem train(const ExperimentConfig& c, PipelineStats* stats = nullptr) {
  c.validate();
  if (c.training.empty()) throw InvalidArgument("train: the training list is empty");
  std::vector<CloudFeatures> extracted = extract_all(c.training, c, stats);
  std::vector<FeatureSet> features;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < extracted.size(); ++i) {
    features.push_back(std::move(extracted[i].features));
    labels.push_back(c.training[i].label);
  }
  return fit_system(c, labels, features, stats);
}

inline FrameResult classify_features(const TrainedSystem& system, const FeatureSet& features) {
  FrameResult r;
  const auto x = describe_features(system, features, &r.empty);
  const Prediction p = classify_descriptor(system, x);
  r.label = p.label;
  r.category = system.categories.at(p.label);
  r.scores = p.scores;
  if (r.empty) r.warning = features.source + ": no local features; classified from the empty histogram";
  return r;
}

/// Same per-cloud processing as training, then the classifier argmax.
inline FrameResult classify_frame(const TrainedSystem& system, const PointCloud& cloud,
                                  const std::string& name = "<frame>") {
  if (system.fingerprint != config_fingerprint(system.config))
    throw DataError("classify_frame: trained system does not match its recorded configuration");
  return classify_features(system, extract_cloud_features(cloud, system.config, name).features);
}

struct TestResult {
  EvaluationReport report;
  std::vector<FrameResult> frames;   ///< one per evaluated cloud
  std::vector<std::string> evaluated;
  std::vector<std::string> skipped;  ///< unreadable clouds
  std::vector<std::string> skip_reasons;
  std::size_t empty_frames = 0;
};

/// Classifies every test cloud and aggregates a report. Clouds that fail to
/// load are skipped and listed. Test labels unknown to the system extend the
/// category set of the report (they can never be predicted).
inline TestResult test(const TrainedSystem& system, const std::vector<CloudEntry>& entries,
                       PipelineStats* stats = nullptr) {
  if (entries.empty()) throw InvalidArgument("test: the test list is empty");
  ExperimentConfig c = system.config;
  std::vector<std::optional<CloudFeatures>> extracted(entries.size());
  std::vector<std::string> errors(entries.size());
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(entries.size(), [&](std::size_t i) {
    try {
      extracted[i] = process_cloud_file(entries[i].path, c);
    } catch (const DataError& e) {
      if (std::string_view(e.what()).find(": load: ") == std::string_view::npos) throw;
      errors[i] = e.what();
    }
  });
  if (stats) {
    for (const auto& f : extracted)
      if (f) stats->absorb(*f);
    stats->extraction_seconds += detail::seconds_since(t0);
  }

  TestResult out;
  std::vector<std::string> categories = system.categories;
  for (const auto& e : entries)
    if (std::find(categories.begin(), categories.end(), e.label) == categories.end()) categories.push_back(e.label);
  std::sort(categories.begin() + static_cast<std::ptrdiff_t>(system.categories.size()), categories.end());

  const auto t1 = std::chrono::steady_clock::now();
  std::vector<std::optional<FrameResult>> frames(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    if (extracted[i]) frames[i] = classify_features(system, extracted[i]->features);
  });
  std::vector<std::size_t> predicted, truth;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!frames[i]) {
      out.skipped.push_back(entries[i].path);
      out.skip_reasons.push_back(errors[i]);
      continue;
    }
    out.empty_frames += frames[i]->empty ? 1 : 0;
    predicted.push_back(frames[i]->label);
    truth.push_back(static_cast<std::size_t>(
        std::find(categories.begin(), categories.end(), entries[i].label) - categories.begin()));
    out.evaluated.push_back(entries[i].path);
    out.frames.push_back(std::move(*frames[i]));
  }
  if (stats) {
    stats->classify_seconds += detail::seconds_since(t1);
    stats->empty_clouds += out.empty_frames;
  }
  out.report = evaluate(predicted, truth, categories);
  return out;
}

struct ValidationResult {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation over folds
  std::vector<double> fold_accuracy;
};

/// Stratified k-fold cross-validation over the training list. Within each
/// category, the i-th cloud (in list order) goes to fold i mod folds. The
/// dictionary is rebuilt from each fold's training part.
inline ValidationResult validate(const ExperimentConfig& c, std::size_t folds, PipelineStats* stats = nullptr) {
  c.validate();
  if (folds < 2) throw InvalidArgument("validate: folds must be >= 2");
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < c.training.size(); ++i) members[c.training[i].label].push_back(i);
  if (members.size() < 2) throw InvalidArgument("validate: at least two categories are required");
  for (const auto& [label, idx] : members)
    if (idx.size() < folds)
      throw DataError("validate: category '" + label + "' has " + std::to_string(idx.size()) + " clouds for " +
                      std::to_string(folds) + " folds");
  std::vector<std::size_t> fold_of(c.training.size());
  for (const auto& [label, idx] : members)
    for (std::size_t r = 0; r < idx.size(); ++r) fold_of[idx[r]] = r % folds;

  const std::vector<CloudFeatures> extracted = extract_all(c.training, c, stats);
  ValidationResult out;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::string> labels;
    std::vector<FeatureSet> features;
    for (std::size_t i = 0; i < extracted.size(); ++i) {
      if (fold_of[i] == f) continue;
      labels.push_back(c.training[i].label);
      features.push_back(extracted[i].features);
    }
    const TrainedSystem sys = fit_system(c, labels, features, stats);
    std::vector<std::size_t> predicted, truth;
    std::vector<std::string> categories = sys.categories;
    for (std::size_t i = 0; i < extracted.size(); ++i) {
      if (fold_of[i] != f) continue;
      predicted.push_back(classify_features(sys, extracted[i].features).label);
      truth.push_back(static_cast<std::size_t>(
          std::find(categories.begin(), categories.end(), c.training[i].label) - categories.begin()));
    }
    out.fold_accuracy.push_back(evaluate(predicted, truth, categories).accuracy);
  }
  double sum = 0.0;
  for (double a : out.fold_accuracy) sum += a;
  out.mean = sum / static_cast<double>(folds);
  double ss = 0.0;
  for (double a : out.fold_accuracy) ss += (a - out.mean) * (a - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(folds - 1));
  return out;
}

// ---------------------------------------------------------------------------
// Serialization:
//   "SLSYSTM1" u32 version | string fingerprint | string config text |
//   u32 ncat | categories | u8 has_dictionary [dictionary] |
//   u8 classifier (0 svm, 1 knn) | model
// ---------------------------------------------------------------------------

inline constexpr char kSystemMagic[9] = "SLSYSTM1";
constexpr std::uint32_t kSystemFormatVersion = 1;

inline void save_system(const TrainedSystem& sys, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError(path + ": cannot open for writing");
  binary::write_header(os, kSystemMagic, kSystemFormatVersion);
  binary::write_string(os, sys.fingerprint);
  ExperimentConfig settings = sys.config;
  settings.cache_dir.clear();
  binary::write_string(os, format_configuration(settings));
  binary::write<std::uint32_t>(os, static_cast<std::uint32_t>(sys.categories.size()));
  for (const auto& c : sys.categories) binary::write_string(os, c);
  binary::write<std::uint8_t>(os, sys.dictionary ? 1 : 0);
  if (sys.dictionary) write_dictionary(os, *sys.dictionary);
  binary::write<std::uint8_t>(os, static_cast<std::uint8_t>(sys.model.index()));
  if (const auto* svm = std::get_if<SvmModel>(&sys.model))
    write_svm_model(os, *svm);
  else
    write_knn_model(os, std::get<KnnModel>(sys.model));
  if (!os) throw DataError(path + ": write failed");
}

inline TrainedSystem load_system(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError(path + ": cannot open trained system");
  try {
    if (binary::read_header(is, kSystemMagic) != kSystemFormatVersion)
      throw DataError("unsupported trained-system version");
    TrainedSystem sys;
    sys.fingerprint = binary::read_string(is);
    std::istringstream text(binary::read_string(is, 1u << 30));
    sys.config = parse_configuration(text, {}, false, path);
    if (config_fingerprint(sys.config) != sys.fingerprint)
      throw DataError("configuration fingerprint mismatch");
    const auto ncat = binary::read<std::uint32_t>(is);
    for (std::uint32_t i = 0; i < ncat; ++i) sys.categories.push_back(binary::read_string(is));
    if (binary::read<std::uint8_t>(is)) sys.dictionary = read_dictionary(is);
    if (sys.dictionary.has_value() != sys.config.uses_dictionary())
      throw DataError("dictionary presence does not match the feature choice");
    if (sys.dictionary && (sys.dictionary->kind != sys.config.feature || sys.dictionary->k() != sys.config.k))
      throw DataError("dictionary does not match the configuration");
    const auto tag = binary::read<std::uint8_t>(is);
    if (tag == 0)
      sys.model = read_svm_model(is);
    else if (tag == 1)
      sys.model = read_knn_model(is);
    else
      throw DataError("unknown classifier tag");
    return sys;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace semloc
