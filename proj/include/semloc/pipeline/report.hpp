// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "semloc/classify/evaluation.hpp"

namespace semloc {

enum class ReportFormat { text, csv, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw InvalidArgument("unknown format '" + std::string(s) + "' (supported: text, csv, json)");
}

/// Two-letter upper-case code for a category name. Known indoor room names map
/// to their customary codes; other names use the initials of their words, or
/// the first two letters of a single word.
inline std::string category_code(const std::string& name) {
  std::string key;
  for (char ch : name)
    if (std::isalnum(static_cast<unsigned char>(ch))) key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  static const std::pair<const char*, const char*> known[] = {
      {"corridor", "CR"},       {"hall", "HA"},          {"professoroffice", "PO"}, {"studentoffice", "SO"},
      {"toilet", "TO"},         {"secretary", "SE"},     {"visioconference", "VC"}, {"warehouse", "WH"},
      {"elevatorarea", "EA"},   {"technicalroom", "TR"}, {"kitchen", "KT"},         {"printerarea", "PA"},
  };
  for (const auto& [n, code] : known)
    if (key == n) return code;
  std::vector<std::string> words;
  std::string cur;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const auto ch = static_cast<unsigned char>(name[i]);
    const bool boundary = !std::isalnum(ch) || (std::isupper(ch) && i > 0 && std::islower(static_cast<unsigned char>(name[i - 1])));
    if (boundary && !cur.empty()) words.push_back(cur), cur.clear();
    if (std::isalnum(ch)) cur += static_cast<char>(std::toupper(ch));
  }
  if (!cur.empty()) words.push_back(cur);
  if (words.empty()) return "??";
  if (words.size() == 1) return words[0].substr(0, 2);
  return std::string{words[0][0], words[1][0]};
}

/// Codes for a category list, made unique by appending a counter on collision.
inline std::vector<std::string> category_codes(const std::vector<std::string>& categories) {
  std::vector<std::string> codes;
  for (const auto& c : categories) {
    std::string code = category_code(c);
    const std::string base = code;
    for (int n = 2; std::find(codes.begin(), codes.end(), code) != codes.end(); ++n) code = base + std::to_string(n);
    codes.push_back(code);
  }
  return codes;
}

inline nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["accuracy"] = r.accuracy;
  j["total"] = r.total();
  j["categories"] = r.categories;
  j["codes"] = category_codes(r.categories);
  j["confusion"] = r.confusion;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  return j;
}

inline EvaluationReport report_from_json(const nlohmann::json& j) {
  try {
    EvaluationReport r;
    r.categories = j.at("categories").get<std::vector<std::string>>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
    r.accuracy = j.at("accuracy").get<double>();
    r.precision = j.at("precision").get<std::vector<double>>();
    r.recall = j.at("recall").get<std::vector<double>>();
    if (r.confusion.size() != r.categories.size()) throw DataError("confusion matrix size mismatch");
    for (const auto& row : r.confusion)
      if (row.size() != r.categories.size()) throw DataError("confusion matrix size mismatch");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report json: ") + e.what());
  }
}

/// Renders accuracy, the confusion matrix (rows: truth, columns: predicted)
/// and per-class precision/recall. csv carries the confusion matrix only.
inline std::string show_results(const EvaluationReport& r, ReportFormat format = ReportFormat::text) {
  const auto codes = category_codes(r.categories);
  std::ostringstream os;
  char buf[64];
  switch (format) {
    case ReportFormat::json: return report_to_json(r).dump(2) + "\n";
    case ReportFormat::csv:
      os << "truth\\predicted";
      for (const auto& c : codes) os << "," << c;
      os << "\n";
      for (std::size_t i = 0; i < codes.size(); ++i) {
        os << codes[i];
        for (auto v : r.confusion[i]) os << "," << v;
        os << "\n";
      }
      return os.str();
    case ReportFormat::text: break;
  }
  std::snprintf(buf, sizeof buf, "accuracy: %.4f (%zu/%zu)\n", r.accuracy, r.correct(), r.total());
  os << buf << "\nconfusion (rows: truth, columns: predicted)\n    ";
  std::size_t width = 4;
  for (const auto& row : r.confusion)
    for (auto v : row) width = std::max(width, std::to_string(v).size() + 1);
  auto pad = [&](const std::string& s) { return std::string(width > s.size() ? width - s.size() : 1, ' ') + s; };
  for (const auto& c : codes) os << pad(c);
  os << "\n";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    os << codes[i] << std::string(codes[i].size() < 4 ? 4 - codes[i].size() : 1, ' ');
    for (auto v : r.confusion[i]) os << pad(std::to_string(v));
    os << "\n";
  }
  os << "\ncode  precision  recall  category\n";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-4s  %9.4f  %6.4f  ", codes[i].c_str(), r.precision[i], r.recall[i]);
    os << buf << r.categories[i] << "\n";
  }
  return os.str();
}

}  // namespace semloc
