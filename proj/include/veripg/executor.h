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
#include <optional>
#include <string>
#include <vector>

#include "veripg/graph.h"
#include "veripg/rule.h"
#include "veripg/validator.h"

namespace veripg {

struct TraceEntry {
  std::string primitive;
  size_t input_size = 0;
  size_t output_size = 0;
  std::int64_t nanos = 0;
};

/// Working state of one traversal. `current` is a sorted, duplicate-free
/// node list until a boolean primitive runs; then `boolean` is set.
struct EvalContext {
  const VeriPG* graph = nullptr;
  std::vector<NodeId> current;
  std::optional<bool> boolean;
  std::optional<std::string> focus_signal;
  std::vector<TraceEntry>* trace = nullptr;

  bool truthy() const { return boolean ? *boolean : !current.empty(); }
};

EvalContext exec_primitive(const EvalContext& ctx, const PrimitiveCall& call);

/// Keeps the members of ctx.current that satisfy `f`.
EvalContext exec_filter(const EvalContext& ctx, const Filter& f);

/// Folds the steps of `path` starting from `ctx`. No per-signal iteration.
EvalContext exec_path(const EvalContext& ctx, const Path& path);

/// Runs a path from the rule entry on a fresh context.
EvalContext exec_path(const VeriPG& g, const Path& path, std::vector<TraceEntry>* trace = nullptr);

struct MatchedNode {
  NodeId id = 0;
  int lineno = 0;
  bool operator==(const MatchedNode&) const = default;
};

struct Finding {
  std::string rule_id;
  std::string cwe;
  std::optional<bool> vulnerable;  // unset when the rule faulted
  std::vector<MatchedNode> matched;
  std::optional<std::string> witness_signal;
  size_t primitives = 0;
  std::int64_t micros = 0;
  std::string diagnostic;
};

/// Executes one rule. `report` is the validator's verdict for the rule; when
/// null the rule is validated here. Faults are captured in the Finding.
Finding run_rule(const VeriPG& g, const Rule& rule, const ValidationReport* report = nullptr);

/// One Finding per rule, ordered by rule_id.
std::vector<Finding> run_rules(const VeriPG& g, const std::vector<Rule>& rules);

/// Findings for a file with several modules: a rule is vulnerable if it fires
/// on any module; matches and statistics are merged.
std::vector<Finding> run_rules(const std::vector<VeriPG>& graphs, const std::vector<Rule>& rules);

/// Findings report JSON for one design.
std::string findings_to_json(const std::string& design, const std::vector<Finding>& findings,
                             bool include_timing = true);

}  // namespace veripg
