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

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "veripg/executor.h"
#include "veripg/graph.h"

namespace veripg {

/// The twelve CWE labels covered by the canned rule pack, grouped by category.
const std::vector<std::string>& cwe_labels();

struct CweCategory {
  std::string name;
  std::vector<std::string> cwes;
};

/// The five vulnerability categories used for grouped scoring.
const std::vector<CweCategory>& cwe_categories();

enum class MutationKind { none, name_substitution, block_extension, structural };

std::string_view mutation_kind_name(MutationKind kind);
MutationKind mutation_kind_from_name(std::string_view name);

/// Consistently renames every declared signal and parameter to a fresh name.
/// Formatting and comments are kept.
std::string mutate_name_substitution(std::string_view src, std::uint64_t seed);

/// Appends 1 to 5 self-contained always blocks over fresh signals to the
/// first module.
std::string mutate_block_extension(std::string_view src, std::uint64_t seed);

/// Wraps procedural statements in begin/end blocks padded with neutral
/// assignments, neutral if/else and neutral for loops. Every DDG relation of
/// the input is asserted to survive; a failing attempt is retried with a
/// derived seed and MutationBroke is thrown when all attempts fail.
std::string mutate_structural(std::string_view src, std::uint64_t seed);

std::string apply_mutation(MutationKind kind, std::string_view src, std::uint64_t seed);

/// (def statement type, use statement type, signal) for every DDG edge.
using DdgTriple = std::tuple<NodeType, NodeType, std::string>;
std::set<DdgTriple> ddg_triples(const std::vector<VeriPG>& graphs);

struct ManifestEntry {
  std::string path;   // relative to the manifest's directory
  std::string label;  // a CWE label or "none"
  std::string origin; // seed | mutated | patched
  MutationKind mutation = MutationKind::none;
  std::uint64_t seed = 0;
  std::string parent;  // design the mutant was derived from, if any

  bool operator==(const ManifestEntry&) const = default;
};

/// Line-delimited JSON, one object per entry. Throws Error on a bad line.
std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::string serialize_manifest(const std::vector<ManifestEntry>& entries);

struct Confusion {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t tn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  Confusion& operator+=(const Confusion& other);
};

struct ScoreReport {
  std::map<std::string, Confusion> per_cwe;
  std::vector<std::pair<std::string, Confusion>> per_category;  // category order
  Confusion total;
};

/// Scores rule firings against manifest labels. A design labelled c is a
/// true positive for c when the rule for c fires; any rule firing on a design
/// not labelled with its CWE is a false positive. Throws MissingFindings.
ScoreReport score(const std::vector<ManifestEntry>& manifest,
                  const std::map<std::string, std::vector<Finding>>& findings);

std::string score_to_json(const ScoreReport& report);
std::string score_to_table(const ScoreReport& report);

/// Every *.json rule in `dir`, sorted by file name. Each rule must parse and
/// validate; the first failure throws Error naming the file.
std::vector<Rule> load_rule_pack(const std::string& dir);

struct ScanResult {
  std::string path;
  bool parsed = false;
  std::vector<std::string> errors;  // lexer or parser errors when !parsed
  std::vector<Finding> findings;
  size_t loc = 0;
};

/// Parses, builds and runs `rules` on one file. Never throws for bad input.
ScanResult scan_source(const std::string& path, const std::string& text,
                       const std::vector<Rule>& rules);
ScanResult scan_file(const std::string& path, const std::vector<Rule>& rules);

/// Non-blank lines.
size_t count_loc(std::string_view text);

struct BenchRow {
  std::string path;
  size_t loc = 0;
  size_t primitives = 0;  // primitive executions summed over the rule pack
  double micros = 0;      // fastest of the repeated rule-pack runs
};

/// Times the rule pack on an already built design `repeat` times.
BenchRow bench_design(const std::string& path, const std::string& text,
                      const std::vector<Rule>& rules, int repeat);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace veripg
