// SPDX-License-Identifier: Apache-2.0
//
// Batch command-line front end:
//   semloc synth     --out DIR [--seed S] [--clouds N] [--points N] [--noise M] [--distractors N]
//   semloc extract   --config CFG [--cache-dir D]
//   semloc dict      --config CFG --out DICT
//   semloc describe  --config CFG [--dict DICT] --out CSV
//   semloc train     --config CFG [--dict DICT --descriptors CSV] --out SYSTEM
//   semloc classify  --system SYSTEM [--config CFG | PCD...] [--out FILE]
//   semloc evaluate  (--system SYSTEM --config CFG | --predictions P --truth T) [--format F]
//   semloc sweep     --config CFG [--detectors ..] [--features ..] [--ks ..] [--classifiers ..] --out CSV
// Common: --threads N, --seed S, --cache-dir D, --set key=value (repeatable), --format, --out.
// Exit codes: 0 ok, 1 usage, 2 data, 3 numeric. Successful runs end with one
// line "summary {json}" on stdout.
#pragma once

#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "semloc/pipeline/report.hpp"
#include "semloc/pipeline/synthetic.hpp"
#include "semloc/pipeline/system.hpp"

namespace semloc::cli {

namespace detail {

struct Common {
  std::string config;
  std::string cache_dir;
  std::string out;
  std::string format = "text";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(semloc::detail::trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!semloc::detail::trim(cur).empty()) out.push_back(semloc::detail::trim(cur));
  return out;
}

inline ExperimentConfig load_config(const Common& o) {
  if (o.config.empty()) throw InvalidArgument("--config is required");
  ExperimentConfig c = read_configuration(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
    set_config_value(c, semloc::detail::trim(kv.substr(0, eq)), semloc::detail::trim(kv.substr(eq + 1)));
  }
  if (o.seed) c.dictionary_seed = *o.seed;
  if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
  c.validate();
  return c;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError(path + ": cannot open for writing");
  os << text;
  if (!os) throw DataError(path + ": write failed");
}

inline nlohmann::json stats_json(const PipelineStats& s) {
  return {{"clouds", s.clouds},
          {"keypoints", s.keypoints},
          {"features", s.features},
          {"dropped_features", s.dropped_features},
          {"dropped_points", s.dropped_points},
          {"empty_clouds", s.empty_clouds},
          {"cache_hits", s.cache_hits},
          {"computed", s.clouds - s.cache_hits},
          {"seconds",
           {{"load", s.stages.load},
            {"normals", s.stages.normals},
            {"detect", s.stages.detect},
            {"extract", s.stages.extract},
            {"extraction_wall", s.extraction_seconds},
            {"dictionary", s.dictionary_seconds},
            {"classifier", s.classifier_seconds},
            {"classify", s.classify_seconds}}}};
}

inline std::vector<FeatureSet> take_features(std::vector<CloudFeatures>&& extracted) {
  std::vector<FeatureSet> out;
  out.reserve(extracted.size());
  for (auto& e : extracted) out.push_back(std::move(e.features));
  return out;
}

inline std::vector<std::string> labels_of(const std::vector<CloudEntry>& entries) {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.label);
  return out;
}

// Descriptor table: split,path,label,empty,v0,...; values printed with %.17g
// so they read back bit-identically.
inline std::string format_descriptor_rows(const std::string& split, const std::vector<CloudEntry>& entries,
                                          const std::vector<std::vector<double>>& rows,
                                          const std::vector<FeatureSet>& features) {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    os << split << "," << entries[i].path << "," << entries[i].label << "," << (features[i].empty() ? 1 : 0);
    for (double v : rows[i]) os << "," << semloc::detail::format_double(v);
    os << "\n";
  }
  return os.str();
}

struct DescriptorTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

inline DescriptorTable read_descriptor_table(const std::string& path, const std::string& split) {
  std::ifstream is(path);
  if (!is) throw DataError(path + ": cannot open descriptor table");
  DescriptorTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) throw DataError(path + ":" + std::to_string(lineno) + ": malformed descriptor row");
    if (cells[0] != split) continue;
    t.labels.push_back(cells[2]);
    std::vector<double> row;
    for (std::size_t i = 4; i < cells.size(); ++i) {
      try {
        row.push_back(semloc::detail::parse_number<double>("descriptor", cells[i]));
      } catch (const InvalidArgument& e) {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// `path<TAB>label` lines (blank and # lines ignored).
inline std::vector<CloudEntry> read_label_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError(path + ": cannot open label file");
  std::vector<CloudEntry> out;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = semloc::detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '[') continue;
    auto sep = t.rfind('\t');
    if (sep == std::string::npos) sep = t.find_last_of(' ');
    if (sep == std::string::npos) throw DataError(path + ": expected 'path<TAB>label' lines");
    out.push_back({semloc::detail::trim(t.substr(0, sep)), semloc::detail::trim(t.substr(sep + 1))});
  }
  return out;
}

struct SweepRow {
  std::string detector, feature;
  std::size_t k = 0;
  std::string classifier;
  double accuracy = 0, train_seconds = 0, test_seconds = 0;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "detector,feature,k,classifier,accuracy,train_seconds,test_seconds\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%s,%.6f,%.3f,%.3f\n", r.k, r.classifier.c_str(), r.accuracy,
                  r.train_seconds, r.test_seconds);
    os << r.detector << "," << r.feature << buf;
  }
  return os.str();
}

/// gnuplot layout: one block per (detector, feature, classifier) curve,
/// blocks separated by two blank lines, columns "k accuracy".
inline std::string sweep_dat(const std::vector<SweepRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::pair<std::size_t, double>>> curves;
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.detector, r.feature, r.classifier);
    if (!curves.count(key)) order.push_back(key);
    curves[key].emplace_back(r.k, r.accuracy);
  }
  std::ostringstream os;
  char buf[64];
  for (std::size_t b = 0; b < order.size(); ++b) {
    if (b) os << "\n\n";
    const auto& [d, f, c] = order[b];
    os << "# " << d << " " << f << " " << c << "\n# k accuracy\n";
    for (const auto& [k, a] : curves[order[b]]) {
      std::snprintf(buf, sizeof buf, "%zu %.6f\n", k, a);
      os << buf;
    }
  }
  return os.str();
}

inline void emit_summary(std::ostream& out, nlohmann::json summary) { out << "summary " << summary.dump() << "\n"; }

}  // namespace detail

/// Runs one invocation. Never throws; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::Common;
  CLI::App app{"semloc: semantic localization from 3D point clouds"};
  app.require_subcommand(1);
  Common o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--seed", o.seed, "seed overriding the configured one");
    sub->add_option("--cache-dir", o.cache_dir, "feature cache directory");
    sub->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", o.out, "output path");
  };
  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--config", o.config, "experiment configuration");
    if (required) opt->required();
    sub->add_option("--set", o.overrides, "key=value override (repeatable)");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  add_common(synth);
  std::size_t synth_clouds = 50, synth_points = 4000, synth_distractors = 0;
  double synth_noise = 0.002, synth_train_fraction = 0.6;
  bool synth_ascii = false;
  synth->add_option("--clouds", synth_clouds, "clouds per category");
  synth->add_option("--points", synth_points, "points per cloud");
  synth->add_option("--noise", synth_noise, "Gaussian noise sigma in meters");
  synth->add_option("--distractors", synth_distractors, "maximum clutter objects per cloud");
  synth->add_option("--train-fraction", synth_train_fraction, "fraction of each category listed for training");
  synth->add_flag("--ascii", synth_ascii, "write ascii PCD files");

  auto* extract = app.add_subcommand("extract", "extract and cache local features");
  add_common(extract);
  add_config(extract, true);

  auto* dict = app.add_subcommand("dict", "build the dictionary from cached training features");
  add_common(dict);
  add_config(dict, true);

  std::string dict_path;
  auto* describe = app.add_subcommand("describe", "compute BoW descriptors for training and test clouds");
  add_common(describe);
  add_config(describe, true);
  describe->add_option("--dict", dict_path, "dictionary file (built when omitted)");

  std::string descriptors_path;
  auto* trn = app.add_subcommand("train", "train a system and save it");
  add_common(trn);
  add_config(trn, true);
  trn->add_option("--dict", dict_path, "prebuilt dictionary");
  trn->add_option("--descriptors", descriptors_path, "descriptor table from 'describe'");

  std::string system_path;
  std::vector<std::string> clouds;
  auto* cls = app.add_subcommand("classify", "label frames with a trained system");
  add_common(cls);
  add_config(cls, false);
  cls->add_option("--system", system_path, "trained system")->required();
  cls->add_option("clouds", clouds, "PCD files (default: the [test] list of --config)");

  std::string predictions_path, truth_path;
  auto* evl = app.add_subcommand("evaluate", "evaluate a system or a prediction file");
  add_common(evl);
  add_config(evl, false);
  evl->add_option("--system", system_path, "trained system");
  evl->add_option("--predictions", predictions_path, "path<TAB>label predictions");
  evl->add_option("--truth", truth_path, "path<TAB>label ground truth");

  std::string sweep_detectors = "uniform_sampling,harris3d", sweep_features = "pfh,pfhrgb,fpfh,shot,cshot",
              sweep_ks = "25,50,100,200", sweep_classifiers = "svm,knn";
  auto* swp = app.add_subcommand("sweep", "accuracy over detectors x features x k x classifiers");
  add_common(swp);
  add_config(swp, true);
  swp->add_option("--detectors", sweep_detectors, "comma-separated detectors");
  swp->add_option("--features", sweep_features, "comma-separated features");
  swp->add_option("--ks", sweep_ks, "comma-separated dictionary sizes");
  swp->add_option("--classifiers", sweep_classifiers, "comma-separated classifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    set_thread_count(o.threads);
    const auto format = parse_report_format(o.format);
    auto require_out = [&](const char* what) {
      if (o.out.empty()) throw InvalidArgument(std::string("--out is required for ") + what);
    };

    if (synth->parsed()) {
      require_out("synth");
      SceneSpec spec = default_scene_spec();
      spec.seed = o.seed.value_or(1);
      spec.clouds_per_category = synth_clouds;
      spec.points_per_cloud = synth_points;
      spec.noise_sigma = synth_noise;
      spec.max_distractors = synth_distractors;
      spec.train_fraction = synth_train_fraction;
      spec.encoding = synth_ascii ? PcdEncoding::ascii : PcdEncoding::binary;
      const auto ds = generate_synthetic_dataset(spec, o.out);
      out << "wrote " << ds.training.size() + ds.test.size() << " clouds, manifest " << ds.manifest << "\n";
      detail::emit_summary(out, {{"command", "synth"},
                                 {"manifest", ds.manifest},
                                 {"training", ds.training.size()},
                                 {"test", ds.test.size()},
                                 {"seed", spec.seed}});
      return 0;
    }

    if (extract->parsed()) {
      ExperimentConfig c = detail::load_config(o);
      if (c.cache_dir.empty()) throw InvalidArgument("extract needs a cache directory (--cache-dir or cache_dir)");
      std::vector<CloudEntry> all = c.training;
      all.insert(all.end(), c.test.begin(), c.test.end());
      PipelineStats stats;
      extract_all(all, c, &stats);
      out << "extracted " << stats.features << " " << descriptor_name(c.feature) << " features from " << stats.clouds
          << " clouds (" << stats.cache_hits << " cached, " << stats.clouds - stats.cache_hits << " computed)\n";
      auto s = detail::stats_json(stats);
      s["command"] = "extract";
      detail::emit_summary(out, s);
      return 0;
    }

    if (dict->parsed()) {
      require_out("dict");
      ExperimentConfig c = detail::load_config(o);
      if (!c.uses_dictionary()) throw InvalidArgument("esf is a global descriptor and uses no dictionary");
      PipelineStats stats;
      const Dictionary d = build_training_dictionary(c, detail::take_features(extract_all(c.training, c, &stats)), &stats);
      save_dictionary(d, o.out);
      out << "dictionary: k = " << d.k() << ", " << d.iterations << " iterations, inertia " << d.inertia << "\n";
      auto s = detail::stats_json(stats);
      s["command"] = "dict";
      s["k"] = d.k();
      s["seed"] = d.seed;
      s["iterations"] = d.iterations;
      s["inertia"] = d.inertia;
      s["out"] = o.out;
      detail::emit_summary(out, s);
      return 0;
    }

    auto load_or_build_dictionary = [&](const ExperimentConfig& c, const std::vector<FeatureSet>& training,
                                        PipelineStats& stats) -> std::optional<Dictionary> {
      if (!c.uses_dictionary()) return std::nullopt;
      if (dict_path.empty()) return build_training_dictionary(c, training, &stats);
      Dictionary d = load_dictionary(dict_path);
      if (d.kind != c.feature || d.k() != c.k)
        throw InvalidArgument(dict_path + ": dictionary does not match the configuration (feature, k)");
      return d;
    };

    if (describe->parsed()) {
      require_out("describe");
      ExperimentConfig c = detail::load_config(o);
      PipelineStats stats;
      const auto train_feats = detail::take_features(extract_all(c.training, c, &stats));
      const auto test_feats = detail::take_features(extract_all(c.test, c, &stats));
      const auto d = load_or_build_dictionary(c, train_feats, stats);
      const auto train_rows = describe_all(c, d, train_feats, &stats);
      const auto test_rows = describe_all(c, d, test_feats, &stats);
      detail::write_text(o.out, "# split,path,label,empty,values (" + std::to_string(c.classifier_dimension()) +
                                    ")\n" + detail::format_descriptor_rows("training", c.training, train_rows, train_feats) +
                                    detail::format_descriptor_rows("test", c.test, test_rows, test_feats));
      auto s = detail::stats_json(stats);
      s["command"] = "describe";
      s["dimension"] = c.classifier_dimension();
      s["out"] = o.out;
      detail::emit_summary(out, s);
      return 0;
    }

    if (trn->parsed()) {
      require_out("train");
      ExperimentConfig c = detail::load_config(o);
      PipelineStats stats;
      TrainedSystem sys;
      if (!descriptors_path.empty()) {
        if (c.uses_dictionary() && dict_path.empty())
          throw InvalidArgument("--descriptors needs the --dict they were computed with");
        auto table = detail::read_descriptor_table(descriptors_path, "training");
        std::optional<Dictionary> d = load_or_build_dictionary(c, {}, stats);
        sys = fit_descriptors(c, table.labels, std::move(table.rows), std::move(d), &stats);
      } else {
        const auto feats = detail::take_features(extract_all(c.training, c, &stats));
        auto d = load_or_build_dictionary(c, feats, stats);
        sys = fit_system(c, detail::labels_of(c.training), feats, &stats, d ? &*d : nullptr);
      }
      save_system(sys, o.out);
      out << "trained " << classifier_name(c.classifier) << " on " << c.training.size() << " clouds, "
          << sys.categories.size() << " categories\n";
      auto s = detail::stats_json(stats);
      s["command"] = "train";
      s["fingerprint"] = sys.fingerprint;
      s["categories"] = sys.categories;
      s["out"] = o.out;
      detail::emit_summary(out, s);
      return 0;
    }

    if (cls->parsed()) {
      TrainedSystem sys = load_system(system_path);
      if (!o.cache_dir.empty()) sys.config.cache_dir = o.cache_dir;
      std::vector<std::string> paths = clouds;
      if (paths.empty()) {
        if (o.config.empty()) throw InvalidArgument("classify needs PCD files or --config");
        for (const auto& e : read_configuration(o.config).test) paths.push_back(e.path);
      }
      std::vector<FrameResult> results(paths.size());
      parallel_for(paths.size(), [&](std::size_t i) {
        results[i] = classify_features(sys, process_cloud_file(paths[i], sys.config).features);
      });
      std::ostringstream table;
      std::size_t empty = 0;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        table << paths[i] << "\t" << results[i].category << "\n";
        if (results[i].empty) {
          ++empty;
          err << "warning: " << results[i].warning << "\n";
        }
      }
      if (o.out.empty())
        out << table.str();
      else
        detail::write_text(o.out, table.str());
      detail::emit_summary(out, {{"command", "classify"}, {"frames", paths.size()}, {"empty_frames", empty}});
      return 0;
    }

    if (evl->parsed()) {
      EvaluationReport report;
      nlohmann::json s{{"command", "evaluate"}};
      if (!predictions_path.empty() || !truth_path.empty()) {
        if (predictions_path.empty() || truth_path.empty())
          throw InvalidArgument("--predictions and --truth go together");
        const auto pred = detail::read_label_file(predictions_path);
        const auto truth = detail::read_label_file(truth_path);
        std::map<std::string, std::string> predicted;
        for (const auto& e : pred) predicted[e.path] = e.label;
        std::set<std::string> names;
        for (const auto& e : truth) names.insert(e.label);
        for (const auto& e : pred) names.insert(e.label);
        const std::vector<std::string> categories(names.begin(), names.end());
        auto index = [&](const std::string& l) {
          return static_cast<std::size_t>(std::find(categories.begin(), categories.end(), l) - categories.begin());
        };
        std::vector<std::size_t> p, t;
        for (const auto& e : truth) {
          const auto it = predicted.find(e.path);
          if (it == predicted.end()) throw DataError(predictions_path + ": no prediction for " + e.path);
          p.push_back(index(it->second));
          t.push_back(index(e.label));
        }
        report = evaluate(p, t, categories);
      } else {
        if (system_path.empty() || o.config.empty())
          throw InvalidArgument("evaluate needs --system with --config, or --predictions with --truth");
        TrainedSystem sys = load_system(system_path);
        if (!o.cache_dir.empty()) sys.config.cache_dir = o.cache_dir;
        PipelineStats stats;
        const TestResult r = test(sys, read_configuration(o.config).test, &stats);
        for (std::size_t i = 0; i < r.skipped.size(); ++i) err << "skipped: " << r.skip_reasons[i] << "\n";
        report = r.report;
        s = detail::stats_json(stats);
        s["command"] = "evaluate";
        s["skipped"] = r.skipped.size();
      }
      const std::string rendered = show_results(report, format);
      if (o.out.empty())
        out << rendered;
      else
        detail::write_text(o.out, rendered);
      s["accuracy"] = report.accuracy;
      s["total"] = report.total();
      detail::emit_summary(out, s);
      return 0;
    }

    if (swp->parsed()) {
      require_out("sweep");
      const ExperimentConfig base = detail::load_config(o);
      std::vector<std::size_t> ks;
      for (const auto& k : detail::split_list(sweep_ks)) {
        if (!k.empty() && k[0] == '-') throw InvalidArgument("--ks: dictionary sizes must be positive");
        ks.push_back(semloc::detail::parse_number<std::size_t>("--ks", k));
      }
      std::vector<detail::SweepRow> rows;
      for (const auto& det : detail::split_list(sweep_detectors)) {
        for (const auto& feat : detail::split_list(sweep_features)) {
          ExperimentConfig c = base;
          c.detector = parse_detector(det);
          c.feature = parse_descriptor_kind(feat);
          const auto train_feats = detail::take_features(extract_all(c.training, c));
          const auto test_feats = detail::take_features(extract_all(c.test, c));
          for (std::size_t k : ks) {
            c.k = k;
            c.validate();
            PipelineStats dstats;
            std::optional<Dictionary> d;
            if (c.uses_dictionary()) d = build_training_dictionary(c, train_feats, &dstats);
            const auto t0 = std::chrono::steady_clock::now();
            const auto train_rows = describe_all(c, d, train_feats);
            const auto test_rows = describe_all(c, d, test_feats);
            const double describe_seconds = semloc::detail::seconds_since(t0);
            for (const auto& clf : detail::split_list(sweep_classifiers)) {
              c.classifier = parse_classifier(clf);
              const auto t1 = std::chrono::steady_clock::now();
              const TrainedSystem sys = fit_descriptors(c, detail::labels_of(c.training), train_rows, d);
              const double train_seconds = semloc::detail::seconds_since(t1) + dstats.dictionary_seconds;
              const auto t2 = std::chrono::steady_clock::now();
              std::vector<std::size_t> pred, truth;
              std::vector<std::string> categories = sys.categories;
              for (const auto& e : c.test)
                if (std::find(categories.begin(), categories.end(), e.label) == categories.end())
                  categories.push_back(e.label);
              for (std::size_t i = 0; i < test_rows.size(); ++i) {
                pred.push_back(classify_descriptor(sys, test_rows[i]).label);
                truth.push_back(static_cast<std::size_t>(
                    std::find(categories.begin(), categories.end(), c.test[i].label) - categories.begin()));
              }
              const double test_seconds = semloc::detail::seconds_since(t2) + describe_seconds / 2;
              const double acc = evaluate(pred, truth, categories).accuracy;
              rows.push_back({det, feat, k, clf, acc, train_seconds, test_seconds});
              err << det << " " << feat << " k=" << k << " " << clf << ": accuracy " << acc << "\n";
            }
          }
        }
      }
      detail::write_text(o.out, detail::sweep_csv(rows));
      std::string dat = o.out;
      if (const auto dot = dat.rfind('.'); dot != std::string::npos && dat.find('/', dot) == std::string::npos)
        dat.erase(dot);
      dat += ".dat";
      detail::write_text(dat, detail::sweep_dat(rows));
      if (format == ReportFormat::csv) out << detail::sweep_csv(rows);
      detail::emit_summary(out, {{"command", "sweep"}, {"rows", rows.size()}, {"out", o.out}, {"gnuplot", dat}});
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage: return 1;
      case ErrorKind::data: return 2;
      case ErrorKind::numeric: return 3;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace semloc::cli
