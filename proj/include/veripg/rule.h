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

#include <bitset>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "veripg/ast.h"

namespace veripg {

// Validator states: one per node type, plus the rule entry and the terminal
// boolean state.
using State = std::uint8_t;
inline constexpr State kEntryState = static_cast<State>(kNodeTypeCount);
inline constexpr State kBooleanState = static_cast<State>(kNodeTypeCount + 1);
inline constexpr size_t kStateCount = kNodeTypeCount + 2;
using StateSet = std::bitset<kStateCount>;

inline State state_of(NodeType type) { return static_cast<State>(type); }
std::string state_name(State s);
std::vector<std::string> state_names(const StateSet& set);
StateSet states_of(std::initializer_list<NodeType> types);
/// Every node-type state (what "any" means as an input state).
StateSet all_node_states();

enum class PrimitiveCategory { generic, boolean, verilog_specific };
enum class ParamKind { node_type, edge_kind, string, integer, node_set_ref };

std::string_view param_kind_name(ParamKind kind);

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::vector<std::string> choices;  // closed vocabulary for string params
};

struct PrimitiveSpec {
  std::string name;
  PrimitiveCategory category;
  std::vector<ParamSpec> params;
  StateSet input_state;
  StateSet output_state;  // union over all parameter values
};

/// The closed primitive catalog in stable order.
const std::vector<PrimitiveSpec>& catalog();
const PrimitiveSpec* find_primitive(std::string_view name);

using Param = std::variant<std::string, std::int64_t>;

struct Predicate {
  std::string attribute;  // type | name | value | lineno | condition
  std::string relation;   // eq | neq | contains | in
  std::vector<std::string> literals;
  bool list_literal = false;  // literal was written as an array
};

struct Filter;

struct PrimitiveCall {
  std::string primitive;
  std::vector<Param> params;
  std::shared_ptr<const Filter> filter;
};

struct Path {
  std::vector<PrimitiveCall> steps;
};

struct FilterOperand {
  std::shared_ptr<const Filter> filter;
  std::shared_ptr<const PrimitiveCall> call;
  std::shared_ptr<const Path> path;
  std::optional<Predicate> predicate;
};

enum class FilterOp { AND, OR, NOT, CMP };

struct Filter {
  FilterOp op = FilterOp::AND;
  std::vector<FilterOperand> operands;
};

enum class Verdict { exists, forall_absent };

struct Rule {
  int schema_version = 1;
  std::string rule_id;
  std::string cwe;
  std::string description;
  Path path;
  Verdict verdict = Verdict::exists;
  std::optional<int> report_at;
};

std::string_view filter_op_name(FilterOp op);
std::string_view verdict_name(Verdict v);

/// Parses rule JSON and checks every primitive name and arity against the
/// catalog. Throws SchemaError, UnknownPrimitive or ArityMismatch.
Rule parse_rule(std::string_view text);

/// Structural parse only: unknown primitives and wrong arities are left for
/// the validator to report. Throws SchemaError.
Rule parse_rule_structure(std::string_view text);

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string serialize_rule(const Rule& rule);

/// Number of primitive calls in a rule, including those nested in filters.
size_t count_primitive_calls(const Rule& rule);

}  // namespace veripg
