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

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "veripg/graph.h"
#include "veripg/rule.h"

namespace veripg {

/// Node types that can sit at the far end of one `kind` edge leaving (or, for
/// the predecessor table, entering) a node of type `from`. Hand-derived from
/// the graph construction rules.
StateSet schema_successors(NodeType from, EdgeKind kind);
StateSet schema_predecessors(NodeType to, EdgeKind kind);
/// Closure of schema_successors over one or more steps.
StateSet schema_descendants(NodeType from, EdgeKind kind);

struct Transition {
  State from;
  std::string primitive;
  std::string param;  // parameter key, empty for parameterless primitives
  StateSet to;
};

struct SchemaFsm {
  StateSet states;
  std::vector<Transition> transitions;
  StateSet self_loops;

  /// Result states of applying (primitive, param) in state `from`; empty when
  /// there is no transition.
  StateSet step(State from, const std::string& primitive, const std::string& param) const;

  std::map<std::tuple<State, std::string, std::string>, StateSet> table;
};

SchemaFsm build_fsm(const std::vector<PrimitiveSpec>& specs);

enum class ViolationKind { IllegalRule, IllegalParameter };

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  int step = 0;  // 1-based index of the top-level path step
  ViolationKind kind = ViolationKind::IllegalRule;
  std::string message;
  std::vector<std::string> allowed_next;
};

struct ValidationReport {
  bool valid = false;
  std::vector<Violation> violations;
  std::vector<StateSet> surviving_states;  // one per validated top-level step
};

ValidationReport validate(const Rule& rule, const SchemaFsm& fsm);

/// {"valid": bool, "violations": [{step, kind, message, allowed_next}]}
std::string report_to_json(const ValidationReport& report);

/// Number of primitive calls flagged with each violation kind.
struct ViolationCounts {
  size_t illegal_rule = 0;
  size_t illegal_parameter = 0;
};
ViolationCounts count_violations(const ValidationReport& report);

}  // namespace veripg
