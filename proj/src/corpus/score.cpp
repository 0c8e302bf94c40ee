// Copyright 2026 The VeriPG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veripg/corpus.h"
#include "veripg/errors.h"

namespace veripg {

const std::vector<CweCategory>& cwe_categories() {
  static const std::vector<CweCategory> categories = {
      {"Improper Access Control", {"CWE-1231", "CWE-1243", "CWE-1244", "CWE-1280"}},
      {"Improper Resource Operate", {"CWE-226", "CWE-1258", "CWE-1271"}},
      {"Improper Lock", {"CWE-1232", "CWE-1234"}},
      {"Side Channel", {"CWE-1255", "CWE-1300"}},
      {"Finite State Machine", {"CWE-1245"}},
  };
  return categories;
}

const std::vector<std::string>& cwe_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const CweCategory& c : cwe_categories()) {
      out.insert(out.end(), c.cwes.begin(), c.cwes.end());
    }
    return out;
  }();
  return labels;
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.path = j.at("path").get<std::string>();
      e.label = j.at("label").get<std::string>();
      e.origin = j.at("origin").get<std::string>();
      e.mutation = mutation_kind_from_name(j.value("mutation", std::string("none")));
      e.seed = j.value("seed", std::uint64_t{0});
      e.parent = j.value("parent", std::string());
      if (e.origin != "seed" && e.origin != "mutated" && e.origin != "patched") {
        throw Error("bad origin '" + e.origin + "'");
      }
      const auto& labels = cwe_labels();
      if (e.label != "none" && std::find(labels.begin(), labels.end(), e.label) == labels.end()) {
        throw Error("unknown label '" + e.label + "'");
      }
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error("manifest line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error("manifest line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return entries;
}

std::string serialize_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const ManifestEntry& e : entries) {
    nlohmann::ordered_json j;
    j["path"] = e.path;
    j["label"] = e.label;
    j["origin"] = e.origin;
    j["mutation"] = mutation_kind_name(e.mutation);
    if (e.mutation != MutationKind::none) {
      j["seed"] = e.seed;
      j["parent"] = e.parent;
    }
    out += j.dump() + "\n";
  }
  return out;
}

double Confusion::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Confusion::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Confusion::f1() const {
  double p = precision();
  double r = recall();
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

Confusion& Confusion::operator+=(const Confusion& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ScoreReport score(const std::vector<ManifestEntry>& manifest,
                  const std::map<std::string, std::vector<Finding>>& findings) {
  ScoreReport report;
  for (const std::string& cwe : cwe_labels()) {
    report.per_cwe[cwe];
  }
  for (const ManifestEntry& e : manifest) {
    auto it = findings.find(e.path);
    if (it == findings.end()) {
      throw MissingFindings(e.path);
    }
    std::set<std::string> fired;
    for (const Finding& f : it->second) {
      if (f.vulnerable.value_or(false)) {
        fired.insert(f.cwe);
      }
    }
    for (auto& [cwe, c] : report.per_cwe) {
      bool labelled = e.label == cwe;
      bool hit = fired.count(cwe) != 0;
      if (labelled) {
        ++(hit ? c.tp : c.fn);
      } else {
        ++(hit ? c.fp : c.tn);
      }
    }
  }
  for (const CweCategory& cat : cwe_categories()) {
    Confusion sum;
    for (const std::string& cwe : cat.cwes) {
      sum += report.per_cwe.at(cwe);
    }
    report.per_category.emplace_back(cat.name, sum);
    report.total += sum;
  }
  return report;
}

namespace {

nlohmann::ordered_json confusion_json(const Confusion& c) {
  nlohmann::ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  j["precision"] = c.precision();
  j["recall"] = c.recall();
  j["f1"] = c.f1();
  return j;
}

}  // namespace

std::string score_to_json(const ScoreReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json cats = nlohmann::ordered_json::array();
  for (const auto& [name, c] : report.per_category) {
    nlohmann::ordered_json j = confusion_json(c);
    j["category"] = name;
    cats.push_back(std::move(j));
  }
  nlohmann::ordered_json cwes = nlohmann::ordered_json::object();
  for (const std::string& cwe : cwe_labels()) {
    cwes[cwe] = confusion_json(report.per_cwe.at(cwe));
  }
  doc["categories"] = std::move(cats);
  doc["cwes"] = std::move(cwes);
  doc["total"] = confusion_json(report.total);
  return doc.dump(2) + "\n";
}

std::string score_to_table(const ScoreReport& report) {
  std::ostringstream out;
  char buf[160];
  auto row = [&](const std::string& name, const Confusion& c) {
    std::snprintf(buf, sizeof buf, "%-27s %4zu %4zu %4zu %4zu %8.2f %8.2f %6.2f\n",
                  name.c_str(), c.tp, c.fp, c.fn, c.tn, 100 * c.precision(), 100 * c.recall(),
                  c.f1());
    out << buf;
  };
  std::snprintf(buf, sizeof buf, "%-27s %4s %4s %4s %4s %8s %8s %6s\n", "Category", "TP", "FP",
                "FN", "TN", "P(%)", "R(%)", "F1");
  out << buf;
  for (const auto& [name, c] : report.per_category) {
    row(name, c);
  }
  row("Total", report.total);
  return out.str();
}

}  // namespace veripg
